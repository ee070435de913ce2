use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radon_metrics::generate::{clustered_pair, equal_mass_clustered_pair, spread_pair};
use radon_metrics::oracle::{dual_lp_oracle_bracket, oracle_tolerance, transport_oracle_w1, DualConstraintSpec};
use radon_metrics::{
    centralized_w1, difference, flat_distance, flat_upper_bound, normalized_w1, radon_distance,
    w1_distance, Backend,
};

#[test]
#[ignore]
fn blast_backend_equivalence_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB1457);
    for case in 0..10_000u64 {
        let n = rng.random_range(1..=500usize);
        let seed = case.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xF00D;
        let (mu, nu) = match case % 3 {
            0 => clustered_pair(n, seed),
            1 => spread_pair(n, seed),
            _ => equal_mass_clustered_pair(n.max(2), seed),
        };
        let a = flat_distance(&mu, &nu, Backend::Array).value();
        let t = flat_distance(&mu, &nu, Backend::Tree).value();
        assert!(
            (a - t).abs() <= 1e-9 * (1.0 + a),
            "case {case} n {n}: array {a} tree {t}"
        );
        let radon = radon_distance(&mu, &nu);
        let fhat = flat_upper_bound(&mu, &nu).value();
        assert!(t <= radon + 1e-9 * (1.0 + radon), "case {case}: flat {t} > radon {radon}");
        assert!(t <= fhat + 1e-9 * (1.0 + fhat), "case {case}: flat {t} > upper bound {fhat}");
        let norm = normalized_w1(&mu, &nu).value();
        assert!(norm.is_finite() && norm >= 0.0);
        let cent = centralized_w1(&mu, &nu).value();
        assert!(cent.is_finite() && cent >= 0.0);
        if case % 3 == 2 {
            let w1 = w1_distance(&mu, &nu);
            assert!(w1.is_finite(), "case {case}: equal-mass w1 infinite");
            let plan = transport_oracle_w1(&mu, &nu).unwrap();
            assert!(
                (w1.value() - plan.cost).abs() <= 1e-9 * (1.0 + plan.cost),
                "case {case}: w1 {} vs plan {}",
                w1.value(),
                plan.cost
            );
            assert!(t <= w1.value() + 1e-9 * (1.0 + w1.value()));
        }
    }
}

#[test]
#[ignore]
fn blast_oracle_brackets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let h = 1e-3;
    for case in 0..5_000u64 {
        let n = rng.random_range(1..=12usize);
        let (mu, nu) = clustered_pair(n, case ^ 0xBEEF);
        let delta = difference(&mu, &nu);
        let tol = oracle_tolerance(&delta, h) + 1e-6;
        let (lo, hi) = dual_lp_oracle_bracket(&delta, &DualConstraintSpec::flat(), h).unwrap();
        assert!(lo <= hi);
        for backend in [Backend::Array, Backend::Tree] {
            let got = flat_distance(&mu, &nu, backend).value();
            assert!(
                got >= lo - tol && got <= hi + tol,
                "case {case} {backend}: {got} outside [{lo}, {hi}] ± {tol}"
            );
        }
        let cent = centralized_w1(&mu, &nu).value();
        let (lo, hi) = dual_lp_oracle_bracket(&delta, &DualConstraintSpec::centralized(), h).unwrap();
        assert!(
            cent >= lo - tol && cent <= hi + tol,
            "case {case}: centralized {cent} outside [{lo}, {hi}] ± {tol}"
        );
    }
}
