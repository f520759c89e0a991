use num_complex::Complex64;
use proptest::prelude::*;

use weightcalc::analytic::{faa_di_bruno_compose, r_coefficients, JetSource};
use weightcalc::indices::gamma_sequence;
use weightcalc::matrices::build_m_alpha;
use weightcalc::sequences::{compare_logs, faa_di_bruno_sequence, ln_factorial};
use weightcalc::weights::{log_convex_minorant, omega_of_sequence, WeightFunction};
use weightcalc::{Jet, RunConfig, WeightMatrix, WeightSequence};

/// Log tables with `logM[0] = 0` built from increments.
fn table(len: std::ops::Range<usize>) -> impl Strategy<Value = WeightSequence> {
    prop::collection::vec(-3.0f64..6.0, len)
        .prop_map(|inc| {
            let mut log_m = vec![0.0];
            for d in inc {
                log_m.push(log_m.last().unwrap() + d);
            }
            WeightSequence::from_logs("p", log_m).unwrap()
        })
}

/// Log-convex tables with quotients increasing to at least `lo`.
fn convex_table(len: std::ops::Range<usize>, lo: f64) -> impl Strategy<Value = WeightSequence> {
    (lo..lo + 2.0, prop::collection::vec(0.05f64..2.0, len)).prop_map(|(start, steps)| {
        let mut q = start;
        let mut log_m = vec![0.0];
        for s in steps {
            log_m.push(log_m.last().unwrap() + q);
            q += s;
        }
        WeightSequence::from_logs("c", log_m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minorant_is_convex_below_and_idempotent(s in table(4..80)) {
        let lc = log_convex_minorant(&s);
        prop_assert!(lc.is_log_convex());
        for (a, b) in lc.log_m().iter().zip(s.log_m()) {
            prop_assert!(*a <= b + 1e-12);
        }
        let again = log_convex_minorant(&lc);
        prop_assert_eq!(again.log_m(), lc.log_m());
        prop_assert_eq!(lc.log_m()[0], s.log_m()[0]);
        prop_assert_eq!(lc.log_m()[s.n()], s.log_m()[s.n()]);
    }

    #[test]
    fn omega_is_nondecreasing(s in convex_table(8..40, 0.0), y in 0.0f64..3.0, dy in 0.0f64..2.0) {
        let w = WeightFunction::from_sequence(&s);
        let bound = w.log_t_max().unwrap();
        prop_assume!(y + dy <= bound);
        let a = omega_of_sequence(&s, y.exp()).unwrap();
        let b = omega_of_sequence(&s, (y + dy).exp()).unwrap();
        prop_assert!(b >= a - 1e-12);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn r_sandwich_on_convex_tables(s in convex_table(80..100, 0.5)) {
        let r = r_coefficients(&s, 32, 1e-12).unwrap();
        for j in 0..=32 {
            let lm = s.log_m()[j];
            prop_assert!(r[j] >= lm - j as f64 * 2f64.ln() - 1e-9);
            prop_assert!(r[j] <= lm + 2f64.ln() + 1e-9);
        }
    }

    #[test]
    fn faa_di_bruno_dominates_check_sequence(s in convex_table(8..30, 0.0)) {
        let circ = faa_di_bruno_sequence(&s).unwrap();
        let check = s.log_check();
        for k in 1..=circ.n() {
            prop_assert!(circ.log_m()[k] >= check[k] - 1e-12);
        }
    }

    #[test]
    fn index_trace_is_monotone(s in convex_table(40..70, 0.0)) {
        let est = gamma_sequence(&s, &RunConfig::default()).unwrap();
        prop_assert!(est.is_monotone());
    }

    #[test]
    fn preceq_is_reflexive(s in table(16..64)) {
        let r = compare_logs(s.log_m(), s.log_m(), &RunConfig::default());
        prop_assert!(r.verdict.is_witnessed());
    }

    #[test]
    fn regularized_rows_are_convex_and_stable(beta in 0.2f64..3.0, alpha in 0.1f64..1.0) {
        let cfg = RunConfig::default();
        let m = WeightMatrix::power_family(beta, vec![0.5, 1.0, 2.0], 64).unwrap();
        // the growth gate needs beta - 1/(p+1) + 1 > alpha on the smallest row
        prop_assume!(beta > alpha - 1.0 / 3.0 + 0.01);
        let reg = build_m_alpha(&m, alpha, &cfg).unwrap();
        let bar = WeightSequence::gevrey_bar(1.0 - alpha, 64);
        for (row, orig) in reg.rows().iter().zip(m.rows()) {
            let lifted = row.product(&bar).unwrap();
            prop_assert!(lifted.lc_violation().is_none());
            for (a, b) in row.log_m().iter().zip(orig.log_m()) {
                prop_assert!(*a <= b + 1e-9);
            }
        }
        let again = build_m_alpha(&reg, alpha, &cfg).unwrap();
        for (a, b) in again.rows().iter().zip(reg.rows()) {
            for (x, y) in a.log_m().iter().zip(b.log_m()) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
            }
        }
    }

    #[test]
    fn composition_matches_series_arithmetic(
        g in prop::collection::vec(-2.0f64..2.0, 9),
        f in prop::collection::vec(-2.0f64..2.0, 9),
    ) {
        let n = 8;
        let gj = jet_from(&g);
        let fj = jet_from(&f);
        let got = faa_di_bruno_compose(&gj, &fj, n).unwrap();
        let want = compose_series(&g, &f, n);
        for k in 0..=n {
            let d = got.deriv(k).re - want[k];
            prop_assert!(d.abs() <= 1e-9 * (1.0 + want[k].abs()), "order {}: {} vs {}", k, got.deriv(k).re, want[k]);
        }
    }
}

fn jet_from(v: &[f64]) -> Jet {
    let values: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Jet::from_values(&values, JetSource::Table).unwrap()
}

/// Derivatives at 0 of `g(f(x))` where `g` is expanded around `f(0)`, by truncated
/// power-series multiplication.
fn compose_series(g: &[f64], f: &[f64], n: usize) -> Vec<f64> {
    let fact = |k: usize| ln_factorial(k).exp();
    let mut h: Vec<f64> = (0..=n).map(|k| f[k] / fact(k)).collect();
    h[0] = 0.0;
    let mut power = vec![0.0; n + 1];
    power[0] = 1.0;
    let mut out = vec![0.0; n + 1];
    for k in 0..=n {
        let gk = g[k] / fact(k);
        for i in 0..=n {
            out[i] += gk * power[i];
        }
        let mut next = vec![0.0; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] += power[i] * h[j];
            }
        }
        power = next;
    }
    out.iter().enumerate().map(|(k, c)| c * fact(k)).collect()
}
