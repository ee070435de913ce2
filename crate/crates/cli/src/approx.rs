use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use radon_metrics::discretize::{AtomPlacement, IntervalMeasureSource};
use radon_metrics::write_measure;

use crate::dist::load_measure;
use crate::{CliError, CliResult};

fn parse_float(token: &str, what: &str) -> Result<f64, CliError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::invalid(format!("bad {what} {token:?}")))
}

/// `uniform <a> <b> <mass>`, `step <file>` or `table <file>`.
fn build_source(spec: &str) -> Result<IntervalMeasureSource, CliError> {
    let tokens: Vec<&str> = spec.split_whitespace().collect();
    match tokens.as_slice() {
        ["uniform", a, b, mass] => {
            let a = parse_float(a, "interval start")?;
            let b = parse_float(b, "interval end")?;
            let mass = parse_float(mass, "mass")?;
            IntervalMeasureSource::uniform(a, b, mass).map_err(|e| CliError::invalid(e.to_string()))
        }
        ["step", file] => {
            let measure = load_measure(Path::new(file))?;
            let atoms = measure.atoms();
            if atoms.len() < 2 {
                return Err(CliError::invalid(
                    "a step source needs at least two distinct atom positions",
                ));
            }
            let (start, end) = (atoms[0].position, atoms[atoms.len() - 1].position);
            IntervalMeasureSource::from_step_measure(&measure, start, end)
                .map_err(|e| CliError::parse(format!("{file}: {e}")))
        }
        ["table", file] => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::parse(format!("{file}: {e}")))?;
            let mut knots = Vec::new();
            for (idx, raw_line) in text.lines().enumerate() {
                let line = raw_line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut fields = line.split_whitespace();
                let (Some(x), Some(f), None) = (fields.next(), fields.next(), fields.next()) else {
                    return Err(CliError::parse(format!(
                        "{file}: line {}: expected `<position> <cdf-value>`",
                        idx + 1
                    )));
                };
                let parse = |t: &str| -> Result<f64, CliError> {
                    t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| {
                        CliError::parse(format!("{file}: line {}: bad number {t:?}", idx + 1))
                    })
                };
                knots.push((parse(x)?, parse(f)?));
            }
            IntervalMeasureSource::from_cdf_table(&knots).map_err(|e| CliError::parse(format!("{file}: {e}")))
        }
        _ => Err(CliError::invalid(format!(
            "bad source spec {spec:?}; expected `uniform <a> <b> <mass>`, `step <file>` or `table <file>`"
        ))),
    }
}

pub(crate) fn run(spec: &str, cells: u64, out: &Path, midpoint: bool) -> CliResult {
    if cells == 0 {
        return Err(CliError::invalid("--n must be at least 1"));
    }
    let source = build_source(spec)?;
    let placement = if midpoint { AtomPlacement::Midpoint } else { AtomPlacement::RightEndpoint };
    let measure = source
        .discretize_at(cells as usize, placement)
        .map_err(|e| CliError::parse(e.to_string()))?;
    let file = File::create(out).map_err(|e| CliError::invalid(format!("{}: {e}", out.display())))?;
    write_measure(BufWriter::new(file), &measure)
        .map_err(|e| CliError::invalid(format!("{}: {e}", out.display())))?;
    Ok(())
}
