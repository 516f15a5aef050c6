use num_traits::ToPrimitive;
use serde_json::Value;

use seqshare_core::analytic::{
    bell_value_biased_closed, bell_value_closed, bound_ratio, bound_value, local_bound, pnc_bound,
    threshold_chain, tsirelson_value, BoundKind, Family, MAX_ANALYTIC_BITS,
};
use seqshare_core::cascade::{
    bell_value_numeric, bell_value_numeric_biased, sequential_state, Cascade, SettingsBias,
};
use seqshare_core::measurement::{effects, gamma, Povm};
use seqshare_core::observables::{
    verify_alice_constraints, verify_parity_obliviousness, Observables, MAX_MATRIX_BITS,
};
use seqshare_core::oracle::{
    local_bound_bruteforce, pnc_bound_bruteforce, quantum_max_check, MAX_ORACLE_BITS,
};
use seqshare_core::pomgame::simulate_game;
use seqshare_core::Scalar;

use crate::output::{Cell, Check, Report};
use crate::{BoundArg, CliError, Cli, Command, FamilyArg, Options};

type Res<T> = Result<T, CliError>;

const THRESHOLD_COLUMNS: [&str; 9] = [
    "n",
    "k",
    "family",
    "bound",
    "alpha_rule",
    "eta_critical",
    "alpha",
    "quantum_value",
    "shares",
];

pub fn dispatch(cli: &Cli) -> Res<Report> {
    let spec = serde_json::to_value(cli).unwrap_or(Value::Null);
    let o = &cli.opts;
    match cli.command {
        Command::Bounds => bounds(o, spec),
        Command::Thresholds => thresholds(o, spec),
        Command::Cascade => cascade(o, spec),
        Command::Biased => biased(o, spec),
        Command::Figure { which } => figure(which, o, spec),
        Command::Pom => pom(o, spec),
        Command::Oracle => oracle(o, spec),
        Command::Verify => verify(o, spec),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require_n(o: &Options) -> Res<usize> {
    o.n.ok_or_else(|| usage("--n is required"))
}

/// `--n ..= --n-max`, with per-command defaults and cap.
fn n_range(o: &Options, default_lo: usize, default_hi: usize, cap: usize) -> Res<Vec<usize>> {
    let lo = o.n.unwrap_or(default_lo);
    let hi = o.n_max.unwrap_or(if o.n.is_some() { lo } else { default_hi });
    if lo < 2 || hi < lo {
        return Err(usage(format!("invalid n range {lo}..={hi}")));
    }
    if hi > cap {
        return Err(usage(format!("n = {hi} exceeds the limit {cap} for this command")));
    }
    Ok((lo..=hi).collect())
}

fn bound_kind(arg: Option<BoundArg>, default: BoundKind) -> BoundKind {
    match arg {
        Some(BoundArg::Local) => BoundKind::Local,
        Some(BoundArg::Pnc) => BoundKind::Pnc,
        None => default,
    }
}

/// `--alpha` without `--family` selects the fixed-alpha family.
fn family(o: &Options, default: Family<f64>) -> Res<Family<f64>> {
    match (o.family, o.alpha) {
        (None, None) => Ok(default),
        (None, Some(a)) | (Some(FamilyArg::FixedAlpha), Some(a)) => Ok(Family::FixedAlpha(a)),
        (Some(FamilyArg::FixedAlpha), None) => match default {
            Family::FixedAlpha(_) => Ok(default),
            _ => Err(usage("--family fixed-alpha needs --alpha")),
        },
        (Some(_), Some(_)) => Err(usage("--alpha only applies to the fixed-alpha family")),
        (Some(FamilyArg::OneParam), None) => Ok(Family::OneParam),
        (Some(FamilyArg::SumToOne), None) => Ok(Family::SumToOne),
    }
}

fn big_cell(v: &num_bigint::BigUint) -> Cell {
    v.to_i64().map_or_else(|| Cell::BigInt(v.to_string()), Cell::Int)
}

fn bounds(o: &Options, spec: Value) -> Res<Report> {
    let ns = n_range(o, 2, 10, MAX_ANALYTIC_BITS)?;
    let mut r = Report::new(
        "Classical and quantum bounds",
        spec,
        vec!["n", "local", "pnc", "tsirelson", "local_ratio", "pnc_ratio"],
    );
    for &n in &ns {
        let local = local_bound(n)?;
        r.push(vec![
            n.into(),
            big_cell(&local),
            big_cell(&pnc_bound(n)?),
            tsirelson_value::<f64>(n)?.into(),
            bound_ratio::<f64>(n, BoundKind::Local)?.into(),
            bound_ratio::<f64>(n, BoundKind::Pnc)?.into(),
        ]);
        if n <= MAX_ORACLE_BITS {
            let brute = local_bound_bruteforce(n)?;
            r.checks.push(Check::holds(
                format!("oracle agrees n={n}"),
                local.to_i64() == Some(brute)
                    && pnc_bound(n)?.to_i64() == Some(pnc_bound_bruteforce(n)?),
            ));
        }
    }
    r.plot = Some((0, 4));
    Ok(r)
}

fn chain_report(
    title: String,
    spec: Value,
    n: usize,
    kind: BoundKind,
    fam: Family<f64>,
    k_max: usize,
    sharing_only: bool,
) -> Res<Report> {
    let chain = threshold_chain(n, kind, fam, k_max)?;
    let mut r = Report::new(title, spec, THRESHOLD_COLUMNS.to_vec());
    for (i, &eta) in chain.criticals.iter().enumerate() {
        if sharing_only && eta >= 1.0 {
            continue;
        }
        let k = i + 1;
        r.push(vec![
            n.into(),
            k.into(),
            fam.name().into(),
            kind.to_string().into(),
            fam.alpha_rule().into(),
            eta.into(),
            fam.alpha_for(eta).into(),
            chain.quantum_value(k)?.into(),
            (eta < 1.0).into(),
        ]);
    }
    r.plot = Some((1, 5));
    Ok(r)
}

fn thresholds(o: &Options, spec: Value) -> Res<Report> {
    let n = require_n(o)?;
    let kind = bound_kind(o.bound, BoundKind::Pnc);
    let fam = family(o, Family::OneParam)?;
    let title = format!("Critical sharpness, n={n}, {kind} bound, {}", fam.name());
    chain_report(title, spec, n, kind, fam, o.k_max.unwrap_or(1000), false)
}

fn povms(o: &Options) -> Res<Vec<Povm<f64>>> {
    let etas = o.etas.as_ref().ok_or_else(|| usage("--etas is required"))?;
    let alphas = match &o.alphas {
        Some(a) if a.len() != etas.len() => {
            return Err(usage("--alphas needs one value per --etas entry"))
        }
        Some(a) => a.clone(),
        None => vec![0.0; etas.len()],
    };
    Ok(etas
        .iter()
        .zip(&alphas)
        .map(|(&e, &a)| Povm::new(e, a))
        .collect::<seqshare_core::Result<_>>()?)
}

fn cascade(o: &Options, spec: Value) -> Res<Report> {
    let n = require_n(o)?;
    let bobs = povms(o)?;
    let local = bound_value::<f64>(n, BoundKind::Local)?;
    let pnc = bound_value::<f64>(n, BoundKind::Pnc)?;
    let mut r = Report::new(
        format!("Sequential Bell values, n={n}"),
        spec,
        vec![
            "n", "k", "eta", "alpha", "bell_numeric", "bell_closed", "local_bound", "pnc_bound",
            "violates_local", "violates_pnc",
        ],
    );
    for k in 1..=bobs.len() {
        let prefix = bobs[..k].to_vec();
        let numeric = bell_value_numeric(&Cascade::new(n, prefix.clone())?)?;
        let closed = bell_value_closed(n, &prefix)?;
        r.push(vec![
            n.into(),
            k.into(),
            bobs[k - 1].eta().into(),
            bobs[k - 1].alpha().into(),
            numeric.into(),
            closed.into(),
            local.into(),
            pnc.into(),
            (numeric > local).into(),
            (numeric > pnc).into(),
        ]);
        r.checks
            .push(Check::near(format!("closed form k={k}"), numeric, closed, 1e-9));
    }
    r.plot = Some((1, 4));
    Ok(r)
}

fn biased(o: &Options, spec: Value) -> Res<Report> {
    let n = require_n(o)?;
    let p = o.bias_p.ok_or_else(|| usage("--bias-p is required"))?;
    if o.alphas.as_ref().is_some_and(|a| a.iter().any(|&x| x != 0.0)) {
        return Err(usage("the biased protocol uses alpha = 0"));
    }
    let etas = o.etas.clone().ok_or_else(|| usage("--etas is required"))?;
    let bobs: Vec<_> = etas
        .iter()
        .map(|&e| Povm::unbiased(e))
        .collect::<seqshare_core::Result<_>>()?;
    let mut r = Report::new(
        format!("Correlated settings, n={n}, p={p}"),
        spec,
        vec!["n", "k", "p", "eta", "bell_numeric", "bell_product_formula", "bell_unbiased"],
    );
    for k in 1..=etas.len() {
        let config = Cascade::with_bias(n, bobs[..k].to_vec(), SettingsBias::Repeat(p))?;
        let numeric = bell_value_numeric_biased(&config)?;
        let product = bell_value_biased_closed(n, &etas[..k], &vec![p; k - 1])?;
        r.push(vec![
            n.into(),
            k.into(),
            p.into(),
            etas[k - 1].into(),
            numeric.into(),
            product.into(),
            bell_value_closed(n, &bobs[..k])?.into(),
        ]);
        // the product formula is exact for two Bobs and at p = 1/n or p = 1
        if k <= 2 {
            r.checks
                .push(Check::near(format!("product formula k={k}"), numeric, product, 1e-9));
        }
    }
    r.plot = Some((1, 4));
    Ok(r)
}

fn figure(which: u8, o: &Options, spec: Value) -> Res<Report> {
    match which {
        1 | 2 => {
            let ns = n_range(o, 2, 100, MAX_ANALYTIC_BITS)?;
            let kind = bound_kind(o.bound, BoundKind::Local);
            let fam = family(o, Family::OneParam)?;
            let k = usize::from(which);
            let title = match which {
                1 => format!("First-Bob critical sharpness, {kind} bound"),
                _ => format!("Second-Bob critical sharpness, {kind} bound, {}", fam.name()),
            };
            let mut r = Report::new(title, spec, THRESHOLD_COLUMNS.to_vec());
            for n in ns {
                let chain = threshold_chain(n, kind, fam, k)?;
                let Some(&eta) = chain.criticals.get(k - 1) else {
                    continue;
                };
                r.push(vec![
                    n.into(),
                    k.into(),
                    fam.name().into(),
                    kind.to_string().into(),
                    fam.alpha_rule().into(),
                    eta.into(),
                    fam.alpha_for(eta).into(),
                    chain.quantum_value(k)?.into(),
                    (eta < 1.0).into(),
                ]);
            }
            r.plot = Some((0, 5));
            Ok(r)
        }
        _ => {
            let n = o.n.unwrap_or(100);
            let kind = bound_kind(o.bound, BoundKind::Pnc);
            let default = if which == 3 {
                Family::SumToOne
            } else {
                Family::FixedAlpha(0.08)
            };
            let fam = family(o, default)?;
            let title = format!("Critical sharpness of sharing Bobs, n={n}, {kind} bound, {}", fam.alpha_rule());
            chain_report(title, spec, n, kind, fam, o.k_max.unwrap_or(10_000), true)
        }
    }
}

fn pom(o: &Options, spec: Value) -> Res<Report> {
    let n = o.n.unwrap_or(2);
    let trials = o.trials.unwrap_or(1_000_000);
    let seed = o.seed.unwrap_or(1);
    let eta = match &o.etas {
        Some(e) if e.len() == 1 => e[0],
        Some(_) => return Err(usage("pom takes a single --etas value")),
        None => 1.0,
    };
    let povm = Povm::new(eta, o.alpha.unwrap_or(0.0))?;
    let rec = simulate_game(n, trials, seed, Some(povm))?;
    let leakage = rec.max_parity_leakage()?;
    let bound = 5.0 / (trials as f64).sqrt();
    let mut r = Report::new(
        format!("Parity-oblivious multiplexing, n={n}"),
        spec,
        vec![
            "n", "trials", "seed", "eta", "alpha", "successes", "empirical_p", "analytic_p",
            "max_parity_leakage", "leakage_bound",
        ],
    );
    r.push(vec![
        n.into(),
        Cell::Int(trials as i64),
        Cell::Text(seed.to_string()),
        eta.into(),
        povm.alpha().into(),
        Cell::Int(rec.successes as i64),
        rec.empirical_p.into(),
        rec.analytic_p.into(),
        leakage.into(),
        bound.into(),
    ]);
    r.checks.push(Check::below("parity leakage", leakage, bound));
    Ok(r)
}

fn oracle(o: &Options, spec: Value) -> Res<Report> {
    let ns = n_range(o, 2, MAX_ORACLE_BITS, MAX_ORACLE_BITS)?;
    let mut r = Report::new(
        "Brute-force bounds and matrix quantum maximum",
        spec,
        vec![
            "n", "local_bruteforce", "local_analytic", "pnc_bruteforce", "pnc_analytic",
            "quantum_matrix", "tsirelson",
        ],
    );
    for n in ns {
        let lb = local_bound_bruteforce(n)?;
        let pb = pnc_bound_bruteforce(n)?;
        let la = local_bound(n)?;
        let pa = pnc_bound(n)?;
        let q = quantum_max_check::<f64>(n)?;
        let t = tsirelson_value::<f64>(n)?;
        r.checks.push(Check::holds(format!("local n={n}"), la.to_i64() == Some(lb)));
        r.checks.push(Check::holds(format!("pnc n={n}"), pa.to_i64() == Some(pb)));
        r.checks.push(Check::near(format!("quantum n={n}"), q, t, 1e-9));
        r.push(vec![
            n.into(),
            Cell::Int(lb),
            big_cell(&la),
            Cell::Int(pb),
            big_cell(&pa),
            q.into(),
            t.into(),
        ]);
    }
    Ok(r)
}

fn verify(o: &Options, spec: Value) -> Res<Report> {
    let n_max = o.n_max.or(o.n).unwrap_or(6);
    if !(2..=MAX_MATRIX_BITS).contains(&n_max) {
        return Err(usage(format!("--n-max must lie in 2..={MAX_MATRIX_BITS}")));
    }
    let tol = f64::consistency_tol();
    let mut r = Report::new("Invariant suite", spec, Vec::new());
    let c = &mut r.checks;
    for n in 2..=n_max {
        let obs = Observables::<f64>::new(n)?;
        c.push(Check::below(format!("anticommutation n={n}"), obs.max_anticommutator(), tol));
        c.push(Check::below(format!("alice squares n={n}"), obs.max_alice_square_residual(), tol));
        c.push(Check::below(format!("optimality n={n}"), obs.optimality_residual(), tol));
        c.push(Check::near(
            format!("quantum maximum n={n}"),
            quantum_max_check::<f64>(n)?,
            tsirelson_value::<f64>(n)?,
            tol,
        ));
        if n >= 3 {
            c.push(Check::below(format!("alice constraints n={n}"), verify_alice_constraints::<f64>(n)?, tol));
            c.push(Check::below(format!("parity obliviousness n={n}"), verify_parity_obliviousness::<f64>(n)?, tol));
        }
        if n <= MAX_ORACLE_BITS {
            c.push(Check::holds(
                format!("classical bounds n={n}"),
                local_bound(n)?.to_i64() == Some(local_bound_bruteforce(n)?)
                    && pnc_bound(n)?.to_i64() == Some(pnc_bound_bruteforce(n)?),
            ));
        }
        let bobs = vec![
            Povm::new(0.6, 0.2)?,
            Povm::sum_to_one(0.7)?,
            Povm::new(0.9, -0.05)?,
        ];
        let config = Cascade::new(n, bobs.clone())?;
        c.push(Check::near(
            format!("cascade closed form n={n}"),
            bell_value_numeric(&config)?,
            bell_value_closed(n, &bobs)?,
            tol,
        ));
        let rho = sequential_state(&config, bobs.len())?;
        c.push(Check::near(format!("trace preserved n={n}"), rho.trace().re, 1.0, tol));
        c.push(Check::holds(format!("positivity n={n}"), rho.is_positive_semidefinite(tol)));
    }
    let x = seqshare_core::observables::pauli::x::<f64>();
    for (eta, alpha) in [(0.3, 0.0), (0.5, 0.5), (0.8, -0.1), (1.0, 0.0)] {
        let e = effects(&Povm::new(eta, alpha)?, &x)?;
        let total = &e.plus + &e.minus;
        let dev = seqshare_core::matrix::frobenius_distance(&total, &seqshare_core::matrix::Matrix::identity(2))?;
        c.push(Check::below(format!("completeness eta={eta} alpha={alpha}"), dev, tol));
    }
    for family in [Family::OneParam, Family::SumToOne] {
        for kind in [BoundKind::Local, BoundKind::Pnc] {
            for n in [2, 3, 10, 100] {
                let chain = threshold_chain(n, kind, family, 1000)?;
                let mut worst = 0.0f64;
                for (j, w) in chain.criticals.windows(2).enumerate() {
                    let g: f64 = gamma(n, &chain.params_at(j + 1)?)?;
                    worst = worst.max((w[1] - w[0] / g).abs());
                }
                c.push(Check::below(
                    format!("chain recursion n={n} {kind} {}", family.name()),
                    worst,
                    tol,
                ));
            }
        }
    }
    Ok(r)
}
