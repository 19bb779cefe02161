//! Event list CSV: `#` comment lines carrying provenance, a header, then one
//! row per particle with 17 significant digits.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pf::{SlitGeometry, SlitIndex};
use crate::trajectory::{DetectionEvent, PropagationMode};

pub const HEADER: &str = "particle_id,slit_index,y_eps_m,theta_rad,y_det_m,x_det_m";

#[derive(Debug, Clone, PartialEq)]
pub struct EventFile {
    pub config_digest: String,
    pub seed: u64,
    pub n_particles: u64,
    pub events: Vec<DetectionEvent>,
}

/// Shortest-exact form is not required; 17 significant digits always
/// round-trips an f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_events(digest: &str, seed: u64, events: &[DetectionEvent]) -> String {
    let mut out = String::with_capacity(128 + events.len() * 112);
    out.push_str("# pfsim events\n");
    let _ = writeln!(out, "# config_digest={digest}");
    let _ = writeln!(out, "# seed={seed}");
    let _ = writeln!(out, "# n_particles={}", events.len());
    out.push_str(HEADER);
    out.push('\n');
    for e in events {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.particle_id,
            e.slit.number(),
            fmt_f64(e.y_eps),
            fmt_f64(e.theta),
            fmt_f64(e.y_det),
            fmt_f64(e.x_det)
        );
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("events line {line}: {msg}"))
}

/// Parses an event file. `flight_scale` is not stored; it is rebuilt from
/// the propagation rule of the configuration the events are analysed with.
pub fn read_events(text: &str, geometry: &SlitGeometry, mode: PropagationMode) -> Result<EventFile> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::Parse("events file is truncated (no final newline)".into()));
    }
    let mut digest = None;
    let mut seed = None;
    let mut n_particles = None;
    let mut header_seen = false;
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.trim().split_once('=') {
                match key.trim() {
                    "config_digest" => digest = Some(value.trim().to_string()),
                    "seed" => seed = Some(value.trim().parse::<u64>().map_err(|e| parse_err(lineno, e))?),
                    "n_particles" => n_particles = Some(value.trim().parse::<u64>().map_err(|e| parse_err(lineno, e))?),
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err(parse_err(lineno, format!("expected header `{HEADER}`")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(parse_err(lineno, format!("expected 6 fields, found {}", fields.len())));
        }
        let float = |k: usize| {
            fields[k]
                .parse::<f64>()
                .map_err(|e| parse_err(lineno, format!("field {}: {e}", k + 1)))
        };
        let particle_id = fields[0].parse::<u64>().map_err(|e| parse_err(lineno, e))?;
        if particle_id != events.len() as u64 {
            return Err(parse_err(
                lineno,
                format!("expected particle_id {}, found {particle_id}", events.len()),
            ));
        }
        let slit_number = fields[1].parse::<i64>().map_err(|e| parse_err(lineno, e))?;
        let slit = SlitIndex::from_number(slit_number).map_err(|e| parse_err(lineno, e))?;
        let theta = float(3)?;
        let flight_scale = match mode {
            PropagationMode::Paper => geometry.screen_distance,
            PropagationMode::Geometric => geometry.screen_distance / theta.cos(),
        };
        events.push(DetectionEvent {
            particle_id,
            slit,
            y_eps: float(2)?,
            theta,
            y_det: float(4)?,
            x_det: float(5)?,
            flight_scale,
        });
    }
    let config_digest = digest.ok_or_else(|| Error::Parse("missing `# config_digest=` line".into()))?;
    let seed = seed.ok_or_else(|| Error::Parse("missing `# seed=` line".into()))?;
    let n_particles = n_particles.ok_or_else(|| Error::Parse("missing `# n_particles=` line".into()))?;
    if !header_seen {
        return Err(Error::Parse("missing column header".into()));
    }
    if events.len() as u64 != n_particles {
        return Err(Error::Parse(format!(
            "events file is truncated: {} rows, header announces {n_particles}",
            events.len()
        )));
    }
    Ok(EventFile {
        config_digest,
        seed,
        n_particles,
        events,
    })
}
