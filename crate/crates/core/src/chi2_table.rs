//! Upper 1 percent critical values of the chi-square distribution.
//!
//! Entry `k - 1` is the 0.99 quantile for `k` degrees of freedom, tabulated
//! offline with an independent quantile routine.

pub(crate) const CHI2_CRIT_99: [f64; 200] = [
    6.6348966010212145,
    9.21034037197618,
    11.344866730144373,
    13.276704135987622,
    15.08627246938899,
    16.811893829770927,
    18.475306906582357,
    20.090235029663233,
    21.665994333461924,
    23.209251158954356,
    24.724970311318277,
    26.216967305535853,
    27.68824961045705,
    29.141237740672796,
    30.57791416689249,
    31.999926908815176,
    33.40866360500461,
    34.805305734705065,
    36.19086912927004,
    37.56623478662507,
    38.93217268351607,
    40.289360437593864,
    41.638398118858476,
    42.97982013935165,
    44.31410489621915,
    45.64168266628317,
    46.962942124751436,
    48.27823577031548,
    49.58788447289881,
    50.89218131151707,
    52.19139483319193,
    53.48577183623535,
    54.77553976011035,
    56.06090874778906,
    57.3420734338592,
    58.61921450168706,
    59.89250004508689,
    61.1620867636897,
    62.4281210161849,
    63.690739751564465,
    64.9500713352112,
    66.20623628399322,
    67.45934792232582,
    68.7095129693454,
    69.95683206583814,
    71.20140024831149,
    72.44330737654823,
    73.68263852010573,
    74.91947430847816,
    76.1538912490127,
    77.38596201613736,
    78.6157557150025,
    79.84333812225145,
    81.0687719062971,
    82.29211682919967,
    83.51342993198946,
    84.73276570506393,
    85.95017624510335,
    87.16571139978757,
    88.37941890144937,
    89.59134449068712,
    90.80153203083871,
    92.01002361413214,
    93.21685966023843,
    94.42207900788506,
    95.62571900011294,
    96.82781556371239,
    98.02840328331405,
    99.22751547056947,
    100.42518422881135,
    101.62144051355205,
    102.81631418914067,
    104.00983408187484,
    105.20202802983307,
    106.3929229296718,
    107.58254478061242,
    108.77091872581823,
    109.95806909135288,
    111.14401942288376,
    112.32879252029748,
    113.51241047036046,
    114.69489467756802,
    115.87626589329334,
    117.0565442433582,
    118.23574925412316,
    119.413899877195,
    120.59101451284052,
    121.76711103218736,
    122.9422067982886,
    124.11631868612129,
    125.28946310158369,
    126.46165599955252,
    127.63291290105586,
    128.80324890961418,
    129.97267872679876,
    131.141216667052,
    132.30887667181258,
    133.47567232298493,
    134.64161685578915,
    135.80672317102676,
    136.97100384679405,
    138.13447114967263,
    139.29713704542644,
    140.45901320923065,
    141.6201110354577,
    142.7804416470438,
    143.94001590445717,
    145.09884441428903,
    146.25693753748627,
    147.41430539724422,
    148.57095788657577,
    149.726904675574,
    150.8821552183826,
    152.03671875988826,
    153.1906043421489,
    154.34382081057052,
    155.49637681984376,
    156.64828083965185,
    157.79954116016174,
    158.95016589730625,
    160.1001629978687,
    161.2495402443784,
    162.39830525982487,
    163.54646551219992,
    164.69402831887504,
    165.84100085082042,
    166.98739013667387,
    168.13320306666492,
    169.27844639640134,
    170.4231267505235,
    171.56725062623144,
    172.71082439669203,
    173.85385431432846,
    174.99634651399933,
    176.13830701607094,
    177.27974172938625,
    178.42065645413675,
    179.561056884639,
    180.7009486120207,
    181.84033712682086,
    182.97922782150437,
    184.11762599289833,
    185.2555368445496,
    186.392965489009,
    187.52991695004386,
    188.66639616478162,
    189.8024079857878,
    190.93795718307996,
    192.07304844608052,
    193.20768638551056,
    194.34187553522693,
    195.47562035400432,
    196.6089252272648,
    197.7417944687562,
    198.87423232218185,
    200.00624296278252,
    201.13783049887294,
    202.26899897333433,
    203.39975236506424,
    204.5300945903855,
    205.66002950441526,
    206.7895609023962,
    207.91869252099028,
    209.04742803953704,
    210.17577108127728,
    211.30372521454336,
    212.43129395391728,
    213.55848076135737,
    214.685289047295,
    215.81172217170197,
    216.93778344512967,
    218.06347612972078,
    219.18880344019473,
    220.3137685448072,
    221.4383745662851,
    222.56262458273736,
    223.68652162854227,
    224.81006869521266,
    225.93326873223884,
    227.05612464791034,
    228.17863931011746,
    229.30081554713246,
    230.42265614837171,
    231.544163865139,
    232.6653414113506,
    233.7861914642428,
    234.9067166650622,
    236.02691961973966,
    237.1468028995476,
    238.2663690417422,
    239.38562055019008,
    240.50455989598024,
    241.62318951802163,
    242.74151182362706,
    243.85952918908308,
    244.97724396020712,
    246.09465845289168,
    247.21177495363602,
    248.32859572006595,
    249.4451229814416,
];
