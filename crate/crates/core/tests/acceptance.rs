//! End-to-end checks, one line per criterion. Runs with a custom harness so
//! the report is always printed.

use std::process::ExitCode;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqshare_core::analytic::{
    approx_threshold, bell_value_biased_closed, bell_value_closed, bound_ratio, local_bound,
    max_sequential_bobs, min_n_for_k, pnc_bound, threshold_chain, tsirelson_value, BoundKind,
    Family,
};
use seqshare_core::cascade::{bell_value_numeric, bell_value_numeric_biased, Cascade, SettingsBias};
use seqshare_core::measurement::Povm;
use seqshare_core::observables::{verify_alice_constraints, verify_parity_obliviousness};
use seqshare_core::oracle::{local_bound_bruteforce, pnc_bound_bruteforce, quantum_max_check};
use seqshare_core::pomgame::simulate_game;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn close_all(got: &[f64], want: &[f64], tol: f64) -> bool {
    got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol)
}

fn chain(n: usize, kind: BoundKind, family: Family<f64>) -> Vec<f64> {
    threshold_chain(n, kind, family, 10_000).unwrap().criticals
}

fn fmt(v: &[f64]) -> String {
    let parts: Vec<_> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn bounds_table() -> Outcome {
    let want = [(2, 2, 2), (3, 6, 4), (4, 12, 8), (5, 30, 16)];
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, l, p) in want {
        let al = local_bound(n).unwrap().to_i64().unwrap();
        let ap = pnc_bound(n).unwrap().to_i64().unwrap();
        let bl = local_bound_bruteforce(n).unwrap();
        let bp = pnc_bound_bruteforce(n).unwrap();
        ok &= al == l && bl == l && ap == p && bp == p;
        rows.push(format!("n={n}: ({al},{ap}) oracle ({bl},{bp})"));
    }
    check(ok, rows.join("; "))
}

fn tsirelson() -> Outcome {
    let mut worst = 0.0f64;
    for n in 2..=6 {
        let v = quantum_max_check::<f64>(n).unwrap();
        worst = worst.max((v - tsirelson_value::<f64>(n).unwrap()).abs());
    }
    check(worst < 1e-9, format!("max deviation {worst:.2e} for n = 2..6"))
}

fn constraints() -> Outcome {
    let mut worst = 0.0f64;
    for n in 3..=6 {
        worst = worst.max(verify_alice_constraints::<f64>(n).unwrap());
        worst = worst.max(verify_parity_obliviousness::<f64>(n).unwrap());
    }
    check(worst < 1e-9, format!("max residual {worst:.2e} for n = 3..6"))
}

fn closed_vs_simulation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=3);
        let bobs: Vec<Povm<f64>> = (0..k)
            .map(|_| {
                let eta = rng.gen_range(0.01..1.0);
                if trial % 2 == 0 {
                    Povm::unbiased(eta).unwrap()
                } else {
                    Povm::sum_to_one(eta).unwrap()
                }
            })
            .collect();
        let numeric = bell_value_numeric(&Cascade::new(n, bobs.clone()).unwrap()).unwrap();
        let closed = bell_value_closed(n, &bobs).unwrap();
        worst = worst.max((numeric - closed).abs());
    }
    check(worst < 1e-9, format!("max deviation {worst:.2e} over 100 configurations"))
}

fn chsh_sharing() -> Outcome {
    let one = threshold_chain::<f64>(2, BoundKind::Local, Family::OneParam, 100).unwrap();
    let sum = threshold_chain::<f64>(2, BoundKind::Local, Family::SumToOne, 100).unwrap();
    let q1 = one.quantum_value(1).unwrap();
    let q2 = one.quantum_value(2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let case_ii = bell_value_closed(2, &[Povm::new(h, 0.14).unwrap(), Povm::sharp()]).unwrap();
    let ok = close_all(&one.criticals, &[h, 0.83, 1.06], 0.005)
        && close_all(&sum.criticals, &[h, 0.92, 1.42], 0.01)
        && close_all(&sum.criticals, &[h, 0.9176, 1.426], 0.001)
        && one.shared_count == 2
        && sum.shared_count == 2
        && (q1 - 2.82).abs() < 0.02
        && (q2 - 2.41).abs() < 0.02
        && (case_ii - 2.39).abs() < 0.02;
    check(
        ok,
        format!(
            "one-param {} sum-to-one {} shared {}/{}; values {q1:.3}, {q2:.3}, case ii {case_ii:.3}",
            fmt(&one.criticals),
            fmt(&sum.criticals),
            one.shared_count,
            sum.shared_count
        ),
    )
}

fn nonlocality_many_bits() -> Outcome {
    let c = threshold_chain::<f64>(3, BoundKind::Local, Family::OneParam, 100).unwrap();
    let maxes: Vec<usize> = (3..=20)
        .map(|n| max_sequential_bobs::<f64>(n, BoundKind::Local, Family::OneParam).unwrap())
        .collect();
    let ok = (c.criticals[0] - 0.87).abs() < 0.01
        && c.criticals[1] >= 1.29
        && c.criticals[1] > 1.0
        && c.shared_count == 1
        && maxes.iter().all(|&m| m == 1);
    check(ok, format!("n=3 chain {}, max Bobs for n=3..20 all 1: {}", fmt(&c.criticals), maxes.iter().all(|&m| m == 1)))
}

fn contextuality_one_param() -> Outcome {
    let c3 = chain(3, BoundKind::Pnc, Family::OneParam);
    let c4 = chain(4, BoundKind::Pnc, Family::OneParam);
    let m3 = max_sequential_bobs::<f64>(3, BoundKind::Pnc, Family::OneParam).unwrap();
    let m4 = max_sequential_bobs::<f64>(4, BoundKind::Pnc, Family::OneParam).unwrap();
    let ok = close_all(&c3, &[0.57, 0.65, 0.78, 1.05], 0.01)
        && close_all(&c3, &[0.5774, 0.658, 0.788, 1.058], 0.01)
        && close_all(&c4, &[0.50, 0.56, 0.64, 0.77, 1.05], 0.01)
        && close_all(&c4, &[0.50, 0.556, 0.637, 0.768, 1.053], 0.01)
        && m3 == 3
        && m4 == 4;
    check(ok, format!("n=3 {} n=4 {} max Bobs {m3}, {m4}", fmt(&c3), fmt(&c4)))
}

fn contextuality_two_param() -> Outcome {
    let s = chain(3, BoundKind::Pnc, Family::SumToOne);
    let f = chain(3, BoundKind::Pnc, Family::FixedAlpha(0.18));
    let ok = close_all(&s, &[0.57, 0.75, 1.13], 0.01)
        && close_all(&s, &[0.5774, 0.753, 1.133], 0.01)
        && close_all(&f, &[0.57, 0.66, 0.80, 1.22], 0.01)
        && close_all(&f, &[0.5774, 0.663, 0.810, 1.222], 0.01);
    check(ok, format!("sum-to-one {} fixed 0.18 {}", fmt(&s), fmt(&f)))
}

fn figures() -> Outcome {
    let fig1: Vec<f64> = (2..=100)
        .map(|n| bound_ratio::<f64>(n, BoundKind::Local).unwrap())
        .collect();
    let fig1_last = *fig1.last().unwrap();
    let fig2: Vec<usize> = (2..=100)
        .filter(|&n| {
            threshold_chain::<f64>(n, BoundKind::Local, Family::OneParam, 2)
                .unwrap()
                .criticals
                .get(1)
                .is_some_and(|&e| e < 1.0)
        })
        .collect();
    let fig3 = threshold_chain::<f64>(100, BoundKind::Pnc, Family::SumToOne, 10_000)
        .unwrap()
        .shared_count;
    let fig4 = threshold_chain::<f64>(100, BoundKind::Pnc, Family::FixedAlpha(0.08), 10_000)
        .unwrap()
        .shared_count;
    let ok = (0.79..=0.83).contains(&fig1_last) && fig2 == [2] && fig3 == 18 && fig4 >= 100;
    check(
        ok,
        format!("first-Bob local at n=100 {fig1_last:.4}; second Bob below 1 at n = {fig2:?}; sum-to-one shares {fig3}; fixed 0.08 shares {fig4}"),
    )
}

fn approximations() -> Outcome {
    let mut dominated = true;
    for n in 2..=20 {
        let c = chain(n, BoundKind::Pnc, Family::OneParam);
        for (k, &exact) in c.iter().enumerate().take(n) {
            dominated &= approx_threshold::<f64>(n, k + 1).unwrap() >= exact - 1e-12;
        }
    }
    let min_ok = (1..=50).all(|k| min_n_for_k(k, 1.0f64).unwrap() == k);
    check(dominated && min_ok, format!("approximation dominates: {dominated}; min n = k for k = 1..50: {min_ok}"))
}

fn biased_settings() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut uniform_dev = 0.0f64;
    let mut repeat_dev = 0.0f64;
    for n in 2..=10 {
        for k in 1..=5 {
            let etas: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
            let p = 1.0 / n as f64;
            let biased = bell_value_biased_closed(n, &etas, &vec![p; k - 1]).unwrap();
            let bobs: Vec<_> = etas.iter().map(|&e| Povm::unbiased(e).unwrap()).collect();
            uniform_dev = uniform_dev.max((biased - bell_value_closed(n, &bobs).unwrap()).abs());
            let same = bell_value_biased_closed(n, &etas, &vec![1.0; k - 1]).unwrap();
            let want = tsirelson_value::<f64>(n).unwrap() * etas[k - 1];
            repeat_dev = repeat_dev.max((same - want).abs());
        }
    }
    let etas = [0.6f64, 0.8];
    let mut numeric_dev = 0.0f64;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let bobs = etas.iter().map(|&e| Povm::unbiased(e).unwrap()).collect();
        let config = Cascade::with_bias(2, bobs, SettingsBias::Repeat(p)).unwrap();
        let numeric = bell_value_numeric_biased(&config).unwrap();
        let closed: f64 = bell_value_biased_closed(2, &etas, &[p]).unwrap();
        numeric_dev = numeric_dev.max((numeric - closed).abs());
    }
    let ok = uniform_dev < 1e-12 && repeat_dev < 1e-12 && numeric_dev < 1e-9;
    check(
        ok,
        format!("p=1/n {uniform_dev:.1e}, p=1 {repeat_dev:.1e}, simulated two-Bob chain {numeric_dev:.1e}"),
    )
}

fn pom_game() -> Outcome {
    let r2 = simulate_game::<f64>(2, 1_000_000, 42, None).unwrap();
    let r3 = simulate_game::<f64>(3, 1_000_000, 42, None).unwrap();
    let bound = 5.0 / (1_000_000f64).sqrt();
    let l2 = r2.max_parity_leakage().unwrap();
    let l3 = r3.max_parity_leakage().unwrap();
    let ok = (r2.empirical_p - 0.8536).abs() < 0.003
        && (r3.empirical_p - 0.7887).abs() < 0.003
        && l2 < bound
        && l3 < bound;
    check(
        ok,
        format!(
            "n=2 {:.4} (analytic {:.4}), n=3 {:.4} (analytic {:.4}), leakage {l2:.1e}/{l3:.1e} < {bound:.1e}",
            r2.empirical_p, r2.analytic_p, r3.empirical_p, r3.analytic_p
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("bounds table", bounds_table),
        ("quantum maximum", tsirelson),
        ("constraints and parity obliviousness", constraints),
        ("closed form vs simulation", closed_vs_simulation),
        ("nonlocality sharing, n = 2", chsh_sharing),
        ("nonlocality sharing, n >= 3", nonlocality_many_bits),
        ("contextuality sharing, one-param", contextuality_one_param),
        ("contextuality sharing, two-param", contextuality_two_param),
        ("figure series", figures),
        ("approximations", approximations),
        ("biased settings", biased_settings),
        ("POM game", pom_game),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
