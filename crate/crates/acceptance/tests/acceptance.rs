//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion, then asserts it. Run with `cargo test -p dualbern-acceptance`.

use std::io::Write;
use std::time::Instant;

use dualbern::bernstein::{BPoly, Interval};
use dualbern::operators::{
    bernstein_like_report, quasi_interpolant_report, stability_report, BuiltinFn, DerivBounds,
    GridOptions, QuasiInterpolant, Smoothness,
};
use dualbern::ratmat::{int, is_row_affine, rat, Mat, Rational};
use dualbern::subspace::{
    bernstein_dual_basis, data_map_invariance_check, dual_basis, is_complete,
    linear_precision_check, make_selection, verify_duality, Embedding, SelectionMap, SubspaceError,
};
use dualbern::symmetric::{
    convergence_table, rate_constant, scaled_inverse_difference, symmetric_dual_matrix,
};
use dualbern_acceptance::{closed_form, golden_tables};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn verdict(id: &str, what: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    // Written to the raw stderr handle so the line shows up even when the
    // test harness captures output.
    let line = format!("[{tag}] criterion {id}: {what} ({detail})\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

/// Random injective selection, in random order when `shuffle` is set.
fn random_case(rng: &mut ChaCha8Rng, max_n: usize, shuffle: bool) -> (usize, usize, Vec<usize>) {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=n);
    let mut pool: Vec<usize> = (0..=n).collect();
    pool.shuffle(rng);
    let mut s: Vec<usize> = pool[..=m].to_vec();
    if !shuffle {
        s.sort_unstable();
    }
    (m, n, s)
}

// ---------------------------------------------------------------- criterion 1

#[test]
fn criterion_1_golden_tables() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (m, k, want) in golden_tables() {
        if symmetric_dual_matrix(m, k) != want {
            failures.push(format!("table m={m} k={k}"));
        }
    }
    // m = 5, k = 2 has no separate reference table; the closed form covers it.
    for m in 2..=5 {
        for k in 1..=6 {
            if symmetric_dual_matrix(m, k) != closed_form(m, k as i64) {
                failures.push(format!("closed form m={m} k={k}"));
            }
        }
    }
    // A middle row ending in 644 is not row-affine, so it cannot be
    // a row of an inverse of a row-affine matrix.
    let typo = Mat::from_scaled_rows(1944, &[&[664, -3520, 7656, -3520, 644]]);
    if is_row_affine(&typo) {
        failures.push("m=4 k=3 row ending in 644 is unexpectedly row-affine".into());
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.3}s"));
    }
    let pass = failures.is_empty();
    verdict(
        "1",
        "symmetric dual matrices equal the reference tables exactly",
        pass,
        &format!("13 tables + closed forms m=2..5, k=1..6, {elapsed:.3}s; {failures:?}"),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_completeness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut selections = 0usize;
    for n in 2..=8 {
        for m in 1..n {
            if !is_complete(&Embedding::bernstein(m, n).unwrap()).unwrap() {
                failures.push(format!("bernstein m={m} n={n} incomplete"));
            }
            let power = Embedding::power(m, n).unwrap();
            for s in SelectionMap::all_increasing(m, n) {
                selections += 1;
                let leading = s.indices().iter().copied().eq(0..=m);
                match (dual_basis(&power, &s), leading) {
                    (Ok(_), true) | (Err(SubspaceError::Singular), false) => {}
                    (r, _) => failures.push(format!(
                        "power m={m} n={n} s={:?}: {:?}",
                        s.indices(),
                        r.map(|_| ())
                    )),
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        failures.push(format!("runtime {elapsed:.1}s"));
    }
    let pass = failures.is_empty();
    verdict(
        "2",
        "Bernstein embedding complete, power embedding only for s = 0..m",
        pass,
        &format!("{selections} selections per embedding, {elapsed:.2}s; {failures:?}"),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_duality_and_affineness() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut failures = Vec::new();
    let mut worst_sum = 0.0f64;
    let mut worst_lin = 0.0f64;
    for case in 0..200 {
        let (m, n, s) = random_case(&mut rng, 10, case % 2 == 1);
        let db = bernstein_dual_basis(m, n, &s, Interval::unit()).unwrap();
        if !verify_duality(&db) {
            failures.push(format!("duality m={m} n={n} s={s:?}"));
        }
        if !is_row_affine(db.transform()) {
            failures.push(format!("row-affine m={m} n={n} s={s:?}"));
        }
        let sum = Interval::unit()
            .grid(101)
            .into_iter()
            .map(|t| (db.eval_all(t).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        worst_sum = worst_sum.max(sum);
        let lin = linear_precision_check(&db);
        worst_lin = worst_lin.max(lin);
        if sum > 1e-12 || lin > 1e-12 {
            failures.push(format!(
                "float m={m} n={n} s={s:?}: sum {sum:e} lin {lin:e}"
            ));
        }
    }
    let pass = failures.is_empty();
    verdict(
        "3",
        "exact duality, row-affine A, partition of unity and linear precision",
        pass,
        &format!("200 cases, max |sum-1| {worst_sum:.1e}, max linear error {worst_lin:.1e}; {failures:?}"),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 4

#[test]
fn criterion_4_data_map_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut failures = Vec::new();
    for case in 0..50 {
        let (m, n, s) = random_case(&mut rng, 9, case % 3 == 0);
        let sel = make_selection(m, n, &s).unwrap();
        if !data_map_invariance_check(m, n, &sel).unwrap() {
            failures.push(format!("m={m} n={n} s={s:?}"));
        }
    }
    let pass = failures.is_empty();
    verdict(
        "4",
        "left and right endpoint functionals give the same dual basis",
        pass,
        &format!("50 cases; {failures:?}"),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 5

#[test]
fn criterion_5_rate_law() {
    let mut failures = Vec::new();
    let mut worst_rel = 0.0f64;
    let mut worst_zero = 0.0f64;
    for m in 2..=4 {
        let c = rate_constant(m);
        let d = scaled_inverse_difference(m, 128);
        for i in 0..=m {
            for j in 0..=m {
                let (cv, dv) = (&c.matrix()[(i, j)], &d[(i, j)]);
                let x = dualbern::ratmat::to_f64(dv);
                if cv.is_zero() {
                    worst_zero = worst_zero.max(x.abs());
                    if x.abs() > 1e-9 {
                        failures.push(format!("m={m} ({i},{j}) zero entry off by {x:.3e}"));
                    }
                } else {
                    let rel = ((dv - cv) / cv).abs();
                    let rel = dualbern::ratmat::to_f64(&rel);
                    worst_rel = worst_rel.max(rel);
                    if rel > 0.02 {
                        failures.push(format!("m={m} ({i},{j}) relative error {rel:.3e}"));
                    }
                }
            }
        }
        for k in (1..=32).chain([64, 128]) {
            let d = scaled_inverse_difference(m, k);
            if d.row(0).iter().chain(d.row(m)).any(|x| !x.is_zero()) {
                failures.push(format!("m={m} k={k} boundary rows nonzero"));
            }
        }
    }
    // independent oracle for m = 2: k (L - E(s_k,:)) row 1 is
    // (k, -2k, k) / (4 (2k - 1)), with limit (1/8, -1/4, 1/8)
    let limit = [rat(1, 8), rat(-1, 4), rat(1, 8)];
    if rate_constant(2).matrix().row(1) != limit {
        failures.push("m=2 limit row".into());
    }
    for k in 1..=128i64 {
        let d = scaled_inverse_difference(2, k as usize);
        let den = 4 * (2 * k - 1);
        let want = [rat(k, den), rat(-2 * k, den), rat(k, den)];
        if d.row(1) != want {
            failures.push(format!("m=2 k={k} expansion"));
        }
    }
    let pass = failures.is_empty();
    verdict(
        "5",
        "k (L - E(s_k,:)) at k=128 matches the rate constant",
        pass,
        &format!(
            "max relative error {worst_rel:.2e} on nonzero entries, max |entry| {worst_zero:.2e} on zero entries; {failures:?}"
        ),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 6

#[test]
fn criterion_6_lagrange_convergence() {
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for m in 2..=4 {
        let ks: Vec<usize> = (1..=64).collect();
        let rows = convergence_table(m, &ks);
        for w in rows[..32].windows(2) {
            if w[1].sup_dist.partial_cmp(&w[0].sup_dist) != Some(std::cmp::Ordering::Less) {
                failures.push(format!("m={m} not decreasing at k={}", w[1].k));
            }
        }
        for k in [8usize, 16, 32] {
            let r = rows[2 * k - 1].sup_dist / rows[k - 1].sup_dist;
            ratios.push(format!("m={m} k={k}: {r:.4}"));
            if !(0.40..=0.60).contains(&r) {
                failures.push(format!("m={m} k={k} ratio {r:.4}"));
            }
        }
    }
    let pass = failures.is_empty();
    verdict(
        "6",
        "sup distance to Lagrange decreases, halving ratio in [0.40, 0.60]",
        pass,
        &format!("{ratios:?}; {failures:?}"),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 7

/// A random continuous function: smooth part plus a kink and a root-type
/// singularity.
#[derive(Debug, Clone, Copy)]
struct RandomFn {
    c: [f64; 7],
}

impl RandomFn {
    fn new(rng: &mut ChaCha8Rng, iv: Interval) -> Self {
        let mut c = [0.0; 7];
        for x in &mut c[..4] {
            *x = rng.gen_range(-2.0..2.0);
        }
        c[4] = rng.gen_range(1.0..12.0);
        c[5] = rng.gen_range(iv.a()..iv.b());
        c[6] = rng.gen_range(0.3..1.5);
        RandomFn { c }
    }

    fn eval(&self, t: f64) -> f64 {
        let c = &self.c;
        c[0] + c[1] * (c[4] * t).sin()
            + c[2] * (t - c[5]).abs()
            + c[3] * (t - c[5]).abs().powf(c[6])
    }
}

fn random_bform(rng: &mut ChaCha8Rng, iv: Interval, m: usize) -> BPoly<f64> {
    BPoly::new(iv, (0..=m).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap()
}

#[test]
fn criterion_7_operator_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let grid = GridOptions::default();
    let intervals = [Interval::unit(), Interval::new(1.0, 3.0).unwrap()];
    let mut failures = Vec::new();

    // Q_s reproduces degree-m polynomials: float path and exact path
    let mut worst_repro = 0.0f64;
    for case in 0..50 {
        let iv = intervals[case % 2];
        let (m, n, s) = random_case(&mut rng, 9, case % 2 == 1);
        let q = QuasiInterpolant::new(m, n, &s, iv).unwrap();
        let p = random_bform(&mut rng, iv, m);
        let img = q.apply(&|t: f64| p.eval(t));
        let err = img
            .coeffs()
            .iter()
            .zip(p.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst_repro = worst_repro.max(err);
        if err > 1e-10 {
            failures.push(format!("reproduction m={m} n={n} s={s:?}: {err:e}"));
        }
        let exact: Vec<Rational> = (0..=m)
            .map(|_| rat(rng.gen_range(-50..50), rng.gen_range(1..20)))
            .collect();
        if q.apply_exact(&exact) != exact {
            failures.push(format!("exact reproduction m={m} n={n} s={s:?}"));
        }
    }

    // norm bound ||Q_s f|| <= ||A|| ||M_n^{-1}|| ||f|| and near-best estimate
    for case in 0..50 {
        let iv = intervals[case % 2];
        let (m, n, s) = random_case(&mut rng, 8, false);
        let f = RandomFn::new(&mut rng, iv);
        let r = quasi_interpolant_report(m, n, &s, &move |t: f64| f.eval(t), iv, &grid).unwrap();
        if r.image_norm > r.report.bound {
            failures.push(format!(
                "norm bound m={m} n={n} s={s:?}: {} > {}",
                r.image_norm, r.report.bound
            ));
        }
        if r.report.sup_error > 1.05 * r.near_best_bound {
            failures.push(format!(
                "near-best m={m} n={n} s={s:?}: {} > {}",
                r.report.sup_error, r.near_best_bound
            ));
        }
    }

    // D_m error bounds for the registry
    let mut bound_checks = 0;
    for iv in intervals {
        for f in BuiltinFn::ALL {
            let deriv: DerivBounds = f.derivative_bounds(iv);
            for (m, n, s) in [
                (1, 1, vec![0, 1]),
                (2, 2, vec![0, 1, 2]),
                (2, 6, vec![0, 3, 6]),
                (3, 6, vec![0, 2, 4, 6]),
                (3, 12, vec![0, 4, 8, 12]),
                (4, 16, vec![0, 4, 8, 12, 16]),
                (2, 5, vec![1, 2, 4]),
                (3, 7, vec![0, 3, 5, 6]),
            ] {
                for sm in [Smoothness::C0, Smoothness::C1, Smoothness::C2] {
                    if sm == Smoothness::C2 && deriv.second.is_none() {
                        continue;
                    }
                    let r = bernstein_like_report(m, n, &s, &f, sm, deriv, iv, &grid).unwrap();
                    bound_checks += 1;
                    if r.sup_error > r.bound {
                        failures.push(format!(
                            "{} on [{}, {}] {sm} m={m} n={n} s={s:?}: {} > {}",
                            f.name(),
                            iv.a(),
                            iv.b(),
                            r.sup_error,
                            r.bound
                        ));
                    }
                }
            }
        }
    }

    // stability sandwich
    for case in 0..100 {
        let iv = intervals[case % 2];
        let (m, n, s) = random_case(&mut rng, 9, case % 2 == 0);
        let db = bernstein_dual_basis(m, n, &s, iv).unwrap();
        let alpha: Vec<f64> = (0..=m).map(|_| rng.gen_range(-5.0..5.0)).collect();
        if let Err(e) = stability_report(&db, &alpha) {
            failures.push(format!("stability m={m} n={n} s={s:?}: {e}"));
        }
    }

    let pass = failures.is_empty();
    verdict(
        "7",
        "Q_s reproduction and norm bound, D_m error bounds, stability sandwich",
        pass,
        &format!(
            "max reproduction error {worst_repro:.1e}, {bound_checks} D_m bound checks, 100 stability cases; {failures:?}"
        ),
    );
    assert!(pass, "{failures:?}");
}

// ---------------------------------------------------------------- criterion 8

#[test]
fn criterion_8_generalized_functional_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut failures = Vec::new();
    let ns: Vec<usize> = (0..8).rev().map(|j| 10_000usize >> j).collect();
    let mut worst_ratio = 0.0f64;
    let mut worst_c = 0.0f64;
    for deg in 0..=4 {
        for _ in 0..3 {
            let p = random_bform(&mut rng, Interval::unit(), deg);
            for x in [0.25, 0.5, 0.75] {
                let errs: Vec<f64> = ns
                    .iter()
                    .map(|&n| {
                        (dualbern::bernstein::generalized_dual_apply(n, x, &p) - p.eval(x)).abs()
                    })
                    .collect();
                for (n, e) in ns.iter().zip(&errs) {
                    worst_c = worst_c.max(*n as f64 * e);
                }
                for (w, n) in errs.windows(2).zip(&ns) {
                    // rounding floor for exactly reproduced low degrees
                    if w[0] < 1e-12 {
                        if w[1] > 1e-12 {
                            failures
                                .push(format!("deg={deg} x={x} n={n}: {} after {}", w[1], w[0]));
                        }
                        continue;
                    }
                    let r = w[1] / w[0];
                    if *n >= 80 {
                        worst_ratio = worst_ratio.max((r - 0.5).abs());
                    }
                    if r > 0.6 || (*n >= 80 && !(0.45..=0.55).contains(&r)) {
                        failures.push(format!("deg={deg} x={x} n={n}: ratio {r:.4}"));
                    }
                }
            }
        }
    }
    let pass = failures.is_empty();
    verdict(
        "8",
        "generalized functional error is O(1/n)",
        pass,
        &format!(
            "n = {}..{}, max |ratio - 1/2| {worst_ratio:.3} for n >= 80, max n*err {worst_c:.3}; {failures:?}",
            ns[0],
            ns[ns.len() - 1]
        ),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn symmetric_dual_matrix_entries_are_rational_integers_over_denominator() {
    // guard for the closed-form helper itself: k = 1 gives the identity
    for m in 2..=5 {
        assert_eq!(closed_form(m, 1), Mat::identity(m + 1));
    }
    assert_eq!(closed_form(2, 2)[(1, 1)], rat(3, 2));
    assert_eq!(symmetric_dual_matrix(2, 2)[(0, 0)], int(1));
}
