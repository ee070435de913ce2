use std::time::Instant;

use radon_metrics::generate::{clustered_pair, spread_pair};
use radon_metrics::{flat_distance, DiscreteMeasure};

use crate::{format_value, BackendArg, CliError, CliResult, DistributionArg};

/// `1k`/`1m` style sizes.
fn parse_size(text: &str) -> Result<usize, CliError> {
    let text = text.trim();
    let (digits, factor) = match text.char_indices().last() {
        Some((i, 'k')) | Some((i, 'K')) => (&text[..i], 1_000usize),
        Some((i, 'm')) | Some((i, 'M')) => (&text[..i], 1_000_000usize),
        _ => (text, 1),
    };
    let base: usize = digits
        .parse()
        .map_err(|_| CliError::invalid(format!("bad instance size {text:?}")))?;
    let n = base.checked_mul(factor).ok_or_else(|| CliError::invalid(format!("size {text:?} overflows")))?;
    if n == 0 {
        return Err(CliError::invalid("instance sizes must be at least 1"));
    }
    Ok(n)
}

/// Per-row seed derived from (base seed, size, repetition) so any row can be
/// regenerated on its own.
fn instance_seed(base: u64, n: usize, rep: u32) -> u64 {
    base.wrapping_add((n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(u64::from(rep))
        .wrapping_mul(0xBF58_476D_1CE4_E5B9)
}

fn generate(distribution: DistributionArg, n: usize, seed: u64) -> (DiscreteMeasure, DiscreteMeasure) {
    match distribution {
        DistributionArg::Clustered => clustered_pair(n, seed),
        DistributionArg::Spread => spread_pair(n, seed),
    }
}

pub(crate) fn run(
    sizes: &[String],
    reps: u32,
    distribution: DistributionArg,
    backends: &[BackendArg],
    seed: u64,
) -> CliResult {
    if reps < 1 {
        return Err(CliError::invalid("--reps must be at least 1"));
    }
    if backends.is_empty() {
        return Err(CliError::invalid("at least one backend is required"));
    }
    let sizes: Vec<usize> = sizes.iter().map(|s| parse_size(s)).collect::<Result<_, _>>()?;

    println!("n,backend,distribution,seed,seconds,value");
    for &n in &sizes {
        // one discarded warm-up call per (n, backend)
        let (warm_mu, warm_nu) = generate(distribution, n, instance_seed(seed, n, 0));
        for &backend in backends {
            flat_distance(&warm_mu, &warm_nu, backend.into());
        }
        for rep in 0..reps {
            let row_seed = instance_seed(seed, n, rep);
            let (mu, nu) = generate(distribution, n, row_seed);
            let mut rows = Vec::with_capacity(backends.len());
            let mut first_value: Option<f64> = None;
            for &backend in backends {
                let start = Instant::now();
                let value = flat_distance(&mu, &nu, backend.into()).value();
                let seconds = start.elapsed().as_secs_f64().max(1e-12);
                match first_value {
                    None => first_value = Some(value),
                    Some(reference) => {
                        if (value - reference).abs() > 1e-9 * (1.0 + reference.abs()) {
                            return Err(CliError::mismatch(format!(
                                "backends disagree on n = {n}, seed {row_seed}: {reference} vs {value}"
                            )));
                        }
                    }
                }
                rows.push(format!(
                    "{n},{backend},{dist},{row_seed},{seconds:.9},{value}",
                    backend = radon_metrics::Backend::from(backend),
                    dist = distribution.name(),
                    value = format_value(value),
                ));
            }
            for row in rows {
                println!("{row}");
            }
        }
    }
    Ok(())
}
