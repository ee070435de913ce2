use std::fs::File;
use std::io::BufWriter;

use radon_metrics::generate::{clustered_pair, equal_mass_clustered_pair};
use radon_metrics::oracle::{
    dual_lp_oracle_bracket_with_cap, oracle_tolerance, transport_oracle_w1, DualConstraintSpec,
};
use radon_metrics::{
    centralized_w1, difference, flat_distance, flat_upper_bound, normalized_w1, radon_distance,
    w1_distance, write_measure, Backend, DiscreteMeasure,
};

use crate::{CliError, CliResult};

const COUNTEREXAMPLE_MU: &str = "counterexample-mu.txt";
const COUNTEREXAMPLE_NU: &str = "counterexample-nu.txt";

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_float(state: &mut u64) -> f64 {
    (splitmix(state) >> 11) as f64 / (1u64 << 53) as f64
}

#[derive(Default)]
struct Report {
    checks: Vec<(&'static str, u64)>,
}

impl Report {
    fn bump(&mut self, name: &'static str) {
        match self.checks.iter_mut().find(|(n, _)| *n == name) {
            Some((_, count)) => *count += 1,
            None => self.checks.push((name, 1)),
        }
    }

    fn total(&self) -> u64 {
        self.checks.iter().map(|(_, c)| c).sum()
    }
}

fn fail(
    property: &'static str,
    detail: String,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
) -> CliError {
    let mut saved = String::new();
    let write = |path: &str, measure: &DiscreteMeasure| -> std::io::Result<()> {
        write_measure(BufWriter::new(File::create(path)?), measure)
    };
    match write(COUNTEREXAMPLE_MU, mu).and_then(|()| write(COUNTEREXAMPLE_NU, nu)) {
        Ok(()) => saved.push_str(&format!(" (pair saved to {COUNTEREXAMPLE_MU}, {COUNTEREXAMPLE_NU})")),
        Err(e) => saved.push_str(&format!(" (could not save counterexample: {e})")),
    }
    CliError::failure(format!("selftest failed [{property}]: {detail}{saved}"))
}

fn check_close(
    property: &'static str,
    got: f64,
    want: f64,
    tolerance: f64,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    report: &mut Report,
) -> CliResult {
    if (got - want).abs() > tolerance {
        return Err(fail(property, format!("got {got}, want {want} (tolerance {tolerance})"), mu, nu));
    }
    report.bump(property);
    Ok(())
}

fn check_le(
    property: &'static str,
    smaller: f64,
    larger: f64,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    report: &mut Report,
) -> CliResult {
    if smaller > larger + 1e-9 * (1.0 + larger.abs()) {
        return Err(fail(property, format!("{smaller} exceeds {larger}"), mu, nu));
    }
    report.bump(property);
    Ok(())
}

/// The closed form must land inside the oracle's two-sided bracket, widened
/// by the grid rounding tolerance on each side.
#[allow(clippy::too_many_arguments)]
fn check_bracket(
    property: &'static str,
    got: f64,
    lower: f64,
    upper: f64,
    epsilon: f64,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    report: &mut Report,
) -> CliResult {
    if got < lower - epsilon || got > upper + epsilon {
        return Err(fail(
            property,
            format!("got {got}, outside oracle bracket [{lower}, {upper}] ± {epsilon}"),
            mu,
            nu,
        ));
    }
    report.bump(property);
    Ok(())
}

pub(crate) fn run(cap: usize, cases: u64, h: f64, seed: u64, inject_fault: bool) -> CliResult {
    if cap < 2 {
        return Err(CliError::invalid("--cap must be at least 2"));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(CliError::invalid("--h must be a positive grid step"));
    }

    let mut state = seed ^ 0xD1F4_5EED;
    let mut report = Report::default();
    for case in 0..cases {
        let n = 2 + (splitmix(&mut state) as usize % (cap - 1));
        let pair_seed = splitmix(&mut state);
        let (mu, nu) = clustered_pair(n, pair_seed);
        let delta = difference(&mu, &nu);
        let oracle_tol = oracle_tolerance(&delta, h) + 1e-6;

        let mut flat_array = flat_distance(&mu, &nu, Backend::Array).value();
        if inject_fault && case == 0 {
            flat_array += 0.5;
        }
        let flat_tree = flat_distance(&mu, &nu, Backend::Tree).value();
        check_close("backend agreement", flat_array, flat_tree, 1e-9 * (1.0 + flat_tree), &mu, &nu, &mut report)?;

        let (flat_lower, flat_upper) =
            dual_lp_oracle_bracket_with_cap(&delta, &DualConstraintSpec::flat(), h, cap)
                .map_err(|e| CliError::invalid(e.to_string()))?;
        check_bracket("flat vs oracle (array)", flat_array, flat_lower, flat_upper, oracle_tol, &mu, &nu, &mut report)?;
        check_bracket("flat vs oracle (tree)", flat_tree, flat_lower, flat_upper, oracle_tol, &mu, &nu, &mut report)?;

        let centralized = centralized_w1(&mu, &nu).value();
        let (cent_lower, cent_upper) =
            dual_lp_oracle_bracket_with_cap(&delta, &DualConstraintSpec::centralized(), h, cap + 1)
                .map_err(|e| CliError::invalid(e.to_string()))?;
        check_bracket("centralized vs oracle", centralized, cent_lower, cent_upper, oracle_tol, &mu, &nu, &mut report)?;

        // equal-mass pair: W1 against both oracles
        let (em_mu, em_nu) = equal_mass_clustered_pair(n, pair_seed ^ 0xABCD);
        let em_delta = difference(&em_mu, &em_nu);
        let em_tol = oracle_tolerance(&em_delta, h) + 1e-6;
        let w1 = w1_distance(&em_mu, &em_nu).value();
        let anchor = em_delta.atoms().first().map_or(0.0, |a| a.position);
        let (w1_lower, w1_upper) =
            dual_lp_oracle_bracket_with_cap(&em_delta, &DualConstraintSpec::w1_anchored(anchor), h, cap)
                .map_err(|e| CliError::invalid(e.to_string()))?;
        check_bracket("w1 vs oracle", w1, w1_lower, w1_upper, em_tol, &em_mu, &em_nu, &mut report)?;
        let plan = transport_oracle_w1(&em_mu, &em_nu).map_err(|e| CliError::invalid(e.to_string()))?;
        check_close("w1 vs transport plan", w1, plan.cost, 1e-9 * (1.0 + plan.cost), &em_mu, &em_nu, &mut report)?;

        // triangle inequality on a random triple
        let eta = clustered_pair(n, splitmix(&mut state)).0;
        type MetricFn<'a> = &'a dyn Fn(&DiscreteMeasure, &DiscreteMeasure) -> f64;
        let metrics: [(&'static str, MetricFn); 3] = [
            ("triangle (normalized)", &|a, b| normalized_w1(a, b).value()),
            ("triangle (flat)", &|a, b| flat_distance(a, b, Backend::Tree).value()),
            ("triangle (radon)", &|a, b| radon_distance(a, b)),
        ];
        for (name, d) in metrics {
            let via = d(&mu, &nu) + d(&nu, &eta);
            check_le(name, d(&mu, &eta), via, &mu, &eta, &mut report)?;
        }

        // invariance spot checks
        let lambda = 0.1 + 3.9 * unit_float(&mut state);
        let t = 10.0 * unit_float(&mut state) - 5.0;
        let (mu_s, nu_s) = (mu.scale_mass(lambda), nu.scale_mass(lambda));
        let (mu_t, nu_t) = (mu.translate(t), nu.translate(t));
        check_close(
            "flat scale equivariance",
            flat_distance(&mu_s, &nu_s, Backend::Tree).value(),
            lambda * flat_tree,
            1e-9 * (1.0 + flat_tree),
            &mu,
            &nu,
            &mut report,
        )?;
        check_close(
            "flat translation invariance",
            flat_distance(&mu_t, &nu_t, Backend::Array).value(),
            flat_tree,
            1e-9 * (1.0 + flat_tree),
            &mu,
            &nu,
            &mut report,
        )?;
        check_close(
            "centralized scale equivariance",
            centralized_w1(&mu_s, &nu_s).value(),
            lambda * centralized,
            1e-9 * (1.0 + centralized),
            &mu,
            &nu,
            &mut report,
        )?;
        let normalized = normalized_w1(&mu, &nu).value();
        check_close(
            "normalized translation invariance",
            normalized_w1(&mu_t, &nu_t).value(),
            normalized,
            1e-9 * (1.0 + normalized),
            &mu,
            &nu,
            &mut report,
        )?;
        let radon = radon_distance(&mu, &nu);
        check_close(
            "radon invariances",
            radon_distance(&mu_t, &nu_t) + radon_distance(&mu_s, &nu_s),
            radon + lambda * radon,
            1e-9 * (1.0 + radon * (1.0 + lambda)),
            &mu,
            &nu,
            &mut report,
        )?;
        let shrink = unit_float(&mut state).max(1e-4);
        let weak_bound = shrink * (mu.total_mass() + nu.total_mass());
        check_le(
            "normalized weak scaling",
            normalized_w1(&mu.scale_mass(shrink), &nu.scale_mass(shrink)).value(),
            weak_bound,
            &mu,
            &nu,
            &mut report,
        )?;

        // domination chain
        check_le("flat below upper bound", flat_tree, flat_upper_bound(&mu, &nu).value(), &mu, &nu, &mut report)?;
        check_le("flat below radon", flat_tree, radon, &mu, &nu, &mut report)?;
        check_le(
            "flat below w1 (equal masses)",
            flat_distance(&em_mu, &em_nu, Backend::Tree).value(),
            w1,
            &em_mu,
            &em_nu,
            &mut report,
        )?;
    }

    for (name, count) in &report.checks {
        println!("{name}: {count} ok");
    }
    println!("selftest: PASS ({} checks, {cases} cases)", report.total());
    Ok(())
}
