use std::path::Path;

use radon_metrics::{
    centralized_w1, flat_distance, flat_distance_traced, flat_upper_bound, normalized_w1,
    parse_measure, radon_distance, w1_distance, Backend, DiscreteMeasure,
};

use crate::{format_value, BackendArg, CliError, CliResult, MetricArg};

pub(crate) fn load_measure(path: &Path) -> Result<DiscreteMeasure, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    parse_measure(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

pub(crate) fn run(
    file_a: &Path,
    file_b: &Path,
    metric: MetricArg,
    backend: Option<BackendArg>,
    trace: bool,
) -> CliResult {
    if metric != MetricArg::Flat && backend.is_some() {
        return Err(CliError::invalid("--backend applies to the flat metric only"));
    }
    if metric != MetricArg::Flat && trace {
        return Err(CliError::invalid("--trace applies to the flat metric only"));
    }
    let mu = load_measure(file_a)?;
    let nu = load_measure(file_b)?;
    let value = match metric {
        MetricArg::W1 => w1_distance(&mu, &nu).value(),
        MetricArg::W1Normalized => normalized_w1(&mu, &nu).value(),
        MetricArg::W1Centralized => centralized_w1(&mu, &nu).value(),
        MetricArg::FlatUpper => flat_upper_bound(&mu, &nu).value(),
        MetricArg::Radon => radon_distance(&mu, &nu),
        MetricArg::Flat => {
            let backend: Backend = backend.unwrap_or(BackendArg::Tree).into();
            if trace {
                flat_distance_traced(&mu, &nu, backend, |k, snapshot| {
                    eprintln!("iter {k}: {snapshot}");
                })
                .value()
            } else {
                flat_distance(&mu, &nu, backend).value()
            }
        }
    };
    println!("{}", format_value(value));
    Ok(())
}
