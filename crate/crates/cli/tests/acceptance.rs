//! One PASS/FAIL line per acceptance criterion. Runs every criterion before
//! reporting, so a failure does not hide the others.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use neron_cli::{parse_problem, parse_problem_with, read_certificate};
use neron_core::groebner::{GroebnerBasis, TrackedBasis};
use neron_core::jets::{hensel_lift, JetPoint, JetRing, JetSeries};
use neron_core::neron::{
    build_stage, desingularize, prepare_free_conormal, DesingCertificate, JacobianSystem,
    MinorTerm, NeronConfig, StageSpec, TLayout,
};
use neron_core::algebra::Presentation;
use neron_core::smooth::{elkik_ideal, DEFAULT_SUBSET_BOUND};
use neron_core::{Field, Monomial, MonomialOrder, Poly, PolyMatrix, Ring, RingRef};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn neron(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neron")).args(args).env("NERON_SEED", "7").output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).trim_end().to_string()
}

fn ring(field: Field, vars: &[&str]) -> RingRef {
    Ring::new(field, vars, MonomialOrder::DegRevLex).unwrap()
}

fn p(r: &RingRef, s: &str) -> Poly {
    Poly::parse(r, s).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------- criterion 1

fn leading(f: &Poly) -> (Monomial, neron_core::Coeff) {
    f.terms()[0].clone()
}

/// Division by a list, top term first, without the kernel's reducer.
fn remainder(f: &Poly, basis: &[Poly]) -> Poly {
    let r = f.ring().clone();
    let (mut rem, mut work) = (Poly::zero(&r), f.clone());
    while !work.is_zero() {
        let (m, c) = leading(&work);
        match basis.iter().find(|g| !g.is_zero() && g.terms()[0].0.divides(&m)) {
            Some(g) => {
                let (gm, gc) = leading(g);
                work = &work - &(&Poly::term(&r, m.div(&gm).unwrap(), c.div(&gc)) * g);
            }
            None => {
                let t = Poly::term(&r, m, c);
                rem = &rem + &t;
                work = &work - &t;
            }
        }
    }
    rem
}

fn s_poly(f: &Poly, g: &Poly) -> Poly {
    let r = f.ring().clone();
    let ((fm, fc), (gm, gc)) = (leading(f), leading(g));
    let l = fm.lcm(&gm);
    &(&Poly::term(&r, l.div(&fm).unwrap(), gc) * f) - &(&Poly::term(&r, l.div(&gm).unwrap(), fc) * g)
}

fn random_poly(rng: &mut ChaCha8Rng, r: &RingRef) -> Poly {
    let n = r.nvars();
    let mut acc = Poly::zero(r);
    for _ in 0..rng.gen_range(1..=4) {
        let mut e = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=3) {
            e[rng.gen_range(0..n)] += 1;
        }
        let c = rng.gen_range(-6i64..=6);
        acc = &acc + &Poly::term(r, Monomial::from_exps(e), r.field().from_i64(c));
    }
    acc
}

fn criterion_1() -> Verdict {
    const VARS: [&str; 4] = ["a", "b", "c", "d"];
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let clock = Instant::now();
    let mut checked = 0;
    for k in 0..24 {
        let field = if k % 2 == 0 { Field::Rational } else { Field::Prime(32003) };
        let n = 2 + k % 3;
        let r = ring(field, &VARS[..n]);
        let gens: Vec<Poly> = (0..rng.gen_range(2..=3)).map(|_| random_poly(&mut rng, &r)).collect();
        let gb = GroebnerBasis::new(&r, &gens);
        let g = gb.polys();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                ensure(remainder(&s_poly(&g[i], &g[j]), g).is_zero(), || format!("ideal {k}: S({i}, {j}) does not reduce to 0"))?;
            }
        }
        let mut perm = gens.clone();
        perm.reverse();
        perm.rotate_left(1);
        ensure(GroebnerBasis::new(&r, &perm).polys() == g, || format!("ideal {k}: basis depends on generator order"))?;
        let tb = TrackedBasis::new(&r, &gens);
        let probes: Vec<Poly> = g.iter().cloned().chain(gens.iter().map(|f| f * &random_poly(&mut rng, &r))).collect();
        for h in &probes {
            let c = tb.lift(h);
            let mut acc = c.remainder.clone();
            for (ci, gi) in c.coefficients.iter().zip(&gens) {
                acc = &acc + &(ci * gi);
            }
            ensure(c.is_member() && &acc == h, || format!("ideal {k}: lift of {h} does not re-expand"))?;
        }
        checked += 1;
    }
    let t = clock.elapsed();
    ensure(t < Duration::from_secs(10), || format!("{checked} ideals took {t:?} (limit 10 s)"))?;
    Ok(format!("{checked} ideals in char 0 and 32003, {t:.2?}"))
}

// ---------------------------------------------------------------- criterion 2

fn mat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Vec<Vec<Poly>> {
    let r = a.ring();
    (0..a.nrows())
        .map(|i| {
            (0..b.ncols())
                .map(|j| (0..a.ncols()).fold(Poly::zero(r), |acc, k| &acc + &(a.get(i, k) * b.get(k, j))))
                .collect()
        })
        .collect()
}

fn is_scaled_identity(m: &[Vec<Poly>], c: &Poly, rows: usize) -> bool {
    m.iter().take(rows).enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, e)| if i == j { e == c } else { e.is_zero() }))
}

fn battery(sys: &JacobianSystem, b: &Presentation) -> Result<(), String> {
    let (r, n) = (sys.r(), b.nalg());
    let vars = b.algebra_vars();
    let rels = sys.relations(b);
    let jac = PolyMatrix::from_rows(&b.ring, rels.iter().map(|f| vars.iter().map(|&v| f.derivative(v)).collect()).collect()).unwrap();
    let mut sum = PolyMatrix::zeros(&b.ring, n, n);
    let mut p = Poly::zero(&b.ring);
    for (t, (h, g)) in sys.terms.iter().zip(sys.completed(b).unwrap()) {
        let ml = &t.minor * &t.l;
        ensure(is_scaled_identity(&mat_mul(&jac, &g), &ml, r), || format!("(df/dY) G != M L (Id|0) for {:?}", t.cols))?;
        ensure(is_scaled_identity(&mat_mul(&g, &h), &ml, n), || format!("G H != M L Id for {:?}", t.cols))?;
        for i in 0..n {
            for j in 0..n {
                sum.set(i, j, sum.get(i, j) + g.get(i, j));
            }
        }
        p = &p + &ml;
    }
    ensure(p == sys.p, || "P != Σ M_i L_i".into())?;
    ensure(is_scaled_identity(&mat_mul(&jac, &sum), &sys.p, r), || "(df/dY) Σ G != (P Id|0)".into())?;
    ensure(sys.d == sys.gamma.pow(sys.exponent), || "d != γ^e".into())
}

fn criterion_2(cert: &DesingCertificate) -> Verdict {
    let mut count = 0;
    for sys in &cert.systems {
        battery(sys, &cert.extended.algebra)?;
        count += 1;
    }
    // systems built after passing to the symmetric algebra
    let problem = parse_problem_with(include_str!("data/worked.nd"), Some(17)).unwrap();
    let (ext, zrels) = prepare_free_conormal(&problem).unwrap();
    let gamma = p(&problem.base_ring(), "x1*x2");
    let sys = neron_core::neron::find_jacobian_system_with(&ext.algebra, &gamma, &zrels, 3, 10).map_err(|e| e.to_string())?;
    battery(&sys, &ext.algebra)?;
    count += 1;
    Ok(format!("{count} systems, all identities exact"))
}

// ---------------------------------------------------------------- criterion 3

fn t_order_at_least_two(q: &Poly, tv: &[usize]) -> bool {
    q.terms().iter().all(|(m, _)| tv.iter().map(|&v| m.exp(v)).sum::<u32>() >= 2)
}

fn criterion_3(cert: &DesingCertificate) -> Verdict {
    let r = ring(Field::Rational, &["x1", "x2", "Y"]);
    let b = Presentation::new(r.clone(), 2, vec![], vec![p(&r, "Y^2")]).unwrap();
    let sys = JacobianSystem {
        subset: vec![0],
        gamma: p(&r, "x1"),
        exponent: 1,
        d: p(&r, "x1"),
        terms: vec![MinorTerm { cols: vec![0], sign: 1, minor: p(&r, "2*Y"), l: p(&r, "1") }],
        p: p(&r, "2*Y"),
        p_hat: p(&r, "x1"),
    };
    let big = ring(Field::Rational, &["x1", "x2", "Y", "T", "W"]);
    let spec = StageSpec {
        b: &b,
        system: &sys,
        ring: big.clone(),
        centers: vec![Poly::zero(&big)],
        unknowns: vec![2],
        layout: TLayout::consecutive(3, 1, 1, 1),
        w: 4,
        s: Poly::one(&big),
        b_vec: vec![Poly::zero(&big)],
        s_hat: Poly::one(&big),
    };
    let st = build_stage(&spec, 12).map_err(|e| e.to_string())?;
    ensure(st.q == vec![p(&big, "T^2")], || format!("Q = {:?}, expected T^2", st.q.iter().map(|q| q.to_string()).collect::<Vec<_>>()))?;

    let t = &cert.target;
    let mut checked = 0;
    for st in &cert.stages {
        let tv = st.layout.all();
        let shared = st.layout.shared();
        let sp = st.s.pow(st.p);
        for (j, &gi) in st.g_rels.iter().enumerate() {
            let q = &(&t.relations[gi] - &(&sp * &st.b[j])) - &(&sp * &Poly::var(&t.ring, shared[j]));
            ensure(t_order_at_least_two(&q, &tv), || format!("Q has a term of T-degree < 2: {q}"))?;
            checked += 1;
        }
    }
    Ok(format!("hand instance Q = T^2; {checked} components of Q and Q~ lie in (T)^2"))
}

// ---------------------------------------------------------------- criterion 4

type Series = Vec<BigRational>;

fn series_mul(a: &Series, b: &Series) -> Series {
    let n = a.len();
    let mut out = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

fn series_inv(a: &Series) -> Series {
    let n = a.len();
    let mut out = vec![BigRational::zero(); n];
    out[0] = a[0].recip();
    for k in 1..n {
        let s = (1..=k).fold(BigRational::zero(), |s, j| s + &a[j] * &out[k - j]);
        out[k] = -s * &out[0];
    }
    out
}

fn criterion_4() -> Verdict {
    const PREC: usize = 8;
    let mut rhs = vec![BigRational::zero(); PREC];
    rhs[0] = BigRational::one();
    rhs[1] = BigRational::one();
    let mut y = rhs.clone();
    y[1] = BigRational::zero();
    let two = BigRational::from_integer(BigInt::from(2));
    for _ in 0..4 {
        let f: Series = series_mul(&y, &y).iter().zip(&rhs).map(|(a, b)| a - b).collect();
        let step = series_mul(&f, &series_inv(&y.iter().map(|c| c * &two).collect()));
        y = y.iter().zip(&step).map(|(a, b)| a - b).collect();
    }

    let base = ring(Field::Rational, &["x1", "x2"]);
    let amb = ring(Field::Rational, &["x1", "x2", "Y"]);
    let mut pt = JetPoint::default();
    pt.set("Y", JetSeries { rep: Poly::one(&base), prec: 1 });
    let out = hensel_lift(&JetRing::new(&base, &[]), &[p(&amb, "Y^2 - (1 + x1)")], &pt, &["Y".to_string()], PREC as u32)
        .map_err(|e| e.to_string())?;
    let got = out.point.get("Y").unwrap();
    for (k, want) in y.iter().enumerate() {
        let c = got.rep.coeff_of(&Monomial::from_exps(vec![k as u32, 0])).to_big_rational();
        ensure(&c == want, || format!("coefficient of x1^{k}: {c} != {want}"))?;
    }
    ensure(got.rep.terms().len() == PREC, || format!("extra terms in {}", got.rep))?;
    let o = &out.residual_orders;
    ensure(o.first() == Some(&1) && o.last() == Some(&(PREC as u32)), || format!("residual orders {o:?}"))?;
    ensure(o.windows(2).all(|w| w[1] >= (2 * w[0]).min(PREC as u32)), || format!("residual orders {o:?} do not double"))?;
    Ok(format!("8 coefficients match, residual orders {o:?}"))
}

// ---------------------------------------------------------------- criteria 5-8

struct Run {
    code: Option<i32>,
    stdout: String,
    stderr: String,
    cert: Option<Vec<u8>>,
    time: Duration,
}

fn desingularize_file(file: &Path, bound: Option<u32>, dir: &Path, tag: &str) -> Run {
    let out = dir.join(format!("{tag}.cert"));
    let mut args = vec!["desingularize".to_string(), file.display().to_string(), "-o".into(), out.display().to_string()];
    if let Some(n) = bound {
        args.extend(["--bound".to_string(), n.to_string()]);
    }
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let clock = Instant::now();
    let o = neron(&argv);
    let time = clock.elapsed();
    let stdout = text(&o.stdout).replace(&dir.display().to_string(), "<dir>");
    Run { code: o.status.code(), stdout, stderr: text(&o.stderr), cert: std::fs::read(&out).ok(), time }
}

fn verify_file(cert: &[u8], dir: &Path) -> (Option<i32>, String) {
    let path = dir.join("verify.cert");
    std::fs::write(&path, cert).unwrap();
    let o = neron(&["verify", path.to_str().unwrap()]);
    (o.status.code(), text(&o.stdout))
}

fn end_to_end(bound: Option<u32>, dir: &Path) -> Verdict {
    let run = desingularize_file(&data("worked.nd"), bound, dir, "worked");
    let cert = match (run.code, &run.cert) {
        (Some(0), Some(c)) => c.clone(),
        _ => return Err(format!("desingularize exited {:?}: {}", run.code, run.stderr)),
    };
    let (code, table) = verify_file(&cert, dir);
    ensure(code == Some(0) && table.matches("PASS").count() == 4, || format!("verify exited {code:?}:\n{table}"))?;
    let c = read_certificate(&String::from_utf8_lossy(&cert)).map_err(|e| e.to_string())?;
    ensure(c.n_eff >= 1, || "N_eff = 0".into())?;
    ensure(run.time < Duration::from_secs(60), || format!("took {:?} (limit 60 s)", run.time))?;
    Ok(format!("4/4 checks pass, N_eff = {}, B' has {} variables, {:.2?}", c.n_eff, c.target.nalg(), run.time))
}

fn criterion_5(dir: &Path) -> Verdict {
    end_to_end(None, dir).map_err(|e| {
        let problem = parse_problem(include_str!("data/worked.nd")).unwrap();
        let c = desingularize(&parse_problem_with(include_str!("data/worked.nd"), Some(17)).unwrap(), &NeronConfig::default());
        let why = match c {
            Ok(c) => format!("d = {}, d' = {}: (d^3, d'^3) contains (x)^N only from N = 17", c.systems[0].d, c.systems[1].d),
            Err(e) => e.to_string(),
        };
        format!("N = {}: {e} ({why})", problem.bound)
    })
}

/// `x1 * sqrt(1 + x1)` truncated below degree `n`, from the binomial series.
fn sqrt_jet(n: u32) -> String {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut binom = BigRational::one();
    let mut terms = Vec::new();
    for k in 0..n.saturating_sub(1) {
        if !binom.is_zero() {
            let sign = if binom.is_negative() { "-" } else { "+" };
            terms.push(format!("{sign} {}*x1^{}", binom.abs(), k + 1));
        }
        binom = binom * (&half - BigRational::from_integer(BigInt::from(k))) / BigRational::from_integer(BigInt::from(k + 1));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ").trim_start_matches("+ ").to_string()
    }
}

fn sqrt_problem(n: u32) -> String {
    format!("char 0\nbound {n}\nbase x1 x2\nvars Y\nideal: Y^2 - x1^2*(1 + x1)\nmap: Y -> {}\n", sqrt_jet(n))
}

fn criterion_6(dir: &Path) -> Result<(String, Vec<Run>), String> {
    let mut runs = Vec::new();
    for n in 1..=12 {
        let file = dir.join(format!("sqrt{n}.nd"));
        std::fs::write(&file, sqrt_problem(n)).unwrap();
        // the jet must be an approximate solution to order N
        let pb = parse_problem(&sqrt_problem(n)).map_err(|e| e.to_string())?;
        ensure(pb.residuals().iter().all(Poly::is_zero), || format!("N = {n}: jet is not a solution mod (x)^N"))?;
        let run = desingularize_file(&file, None, dir, &format!("sqrt{n}"));
        ensure(run.code == Some(2) && run.stderr == "the bound is too small" && run.cert.is_none(), || {
            format!("N = {n}: exit {:?}, stderr {:?}", run.code, run.stderr)
        })?;
        runs.push(run);
    }
    Ok(("exit 2 with `the bound is too small` for N = 1..12".into(), runs))
}

fn criterion_7(dir: &Path) -> Result<(String, Run), String> {
    let run = desingularize_file(&data("smooth.nd"), None, dir, "smooth");
    let cert = run.cert.clone().ok_or_else(|| format!("exit {:?}: {}", run.code, run.stderr))?;
    ensure(run.time < Duration::from_secs(1), || format!("took {:?} (limit 1 s)", run.time))?;
    let c = read_certificate(&String::from_utf8_lossy(&cert)).map_err(|e| e.to_string())?;
    let problem = parse_problem(include_str!("data/smooth.nd")).unwrap();
    ensure(c.is_trivial() && c.target == problem.algebra, || "certificate is not trivial".into())?;
    let h0 = elkik_ideal(&problem.algebra, DEFAULT_SUBSET_BOUND);
    ensure(GroebnerBasis::new(&problem.algebra.ring, &h0.generators).is_unit(), || "H0 != (1)".into())?;
    let (code, table) = verify_file(&cert, dir);
    ensure(code == Some(0), || table.clone())?;
    Ok((format!("trivial certificate, H0 = (1), {:.2?}", run.time), run))
}

fn same(a: &Run, b: &Run) -> bool {
    a.code == b.code && a.stdout == b.stdout && a.stderr == b.stderr && a.cert == b.cert
}

fn criterion_8(dir: &Path, smooth: &Run, sqrt: &[Run]) -> Verdict {
    let again = dir.join("again");
    std::fs::create_dir_all(&again).unwrap();
    let mut compared = 0;
    for bound in [None, Some(17)] {
        let a = desingularize_file(&data("worked.nd"), bound, dir, "det-a");
        let b = desingularize_file(&data("worked.nd"), bound, &again, "det-a");
        ensure(same(&a, &b), || format!("worked example, bound {bound:?}: outputs differ"))?;
        compared += 1;
    }
    for (n, first) in (1..).zip(sqrt) {
        let b = desingularize_file(&dir.join(format!("sqrt{n}.nd")), None, &again, &format!("sqrt{n}"));
        ensure(same(first, &b), || format!("sqrt N = {n}: outputs differ"))?;
        compared += 1;
    }
    let b = desingularize_file(&data("smooth.nd"), None, &again, "smooth");
    ensure(same(smooth, &b), || "smooth example: outputs differ".into())?;
    compared += 1;
    Ok(format!("{compared} reruns byte-identical (seed 7)"))
}

/// Criteria that cannot hold as stated. They are checked exactly as written and
/// reported as FAIL; the run only errors if one of them starts passing or any
/// other criterion fails.
const KNOWN_FAILURES: &[&str] = &["5 (end-to-end, N = 8)"];

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let dir = dir.path();
    let (mut failed, mut unexpected) = (0, 0);
    let mut report = |name: &str, v: Verdict| {
        let known = KNOWN_FAILURES.contains(&name);
        match &v {
            Ok(d) => {
                if known {
                    unexpected += 1;
                }
                println!("criterion {name}: PASS  {d}")
            }
            Err(d) => {
                failed += 1;
                if !known {
                    unexpected += 1;
                }
                println!("criterion {name}: FAIL  {d}")
            }
        }
    };
    let worked = desingularize(&parse_problem_with(include_str!("data/worked.nd"), Some(17)).unwrap(), &NeronConfig::default())
        .expect("worked example at N = 17");
    report("1 (Gröbner kernel)", criterion_1());
    report("2 (identity battery)", criterion_2(&worked));
    report("3 (Taylor construction)", criterion_3(&worked));
    report("4 (Hensel lifting)", criterion_4());
    report("5 (end-to-end, N = 8)", criterion_5(dir));
    report("5 (end-to-end, N = 17 variant)", end_to_end(Some(17), dir));
    let (v6, sqrt) = match criterion_6(dir) {
        Ok((d, runs)) => (Ok(d), runs),
        Err(e) => (Err(e), Vec::new()),
    };
    report("6 (bound gate)", v6);
    let (v7, smooth) = match criterion_7(dir) {
        Ok((d, run)) => (Ok(d), Some(run)),
        Err(e) => (Err(e), None),
    };
    report("7 (smooth short-circuit)", v7);
    let v8 = match &smooth {
        Some(s) if sqrt.len() == 12 => criterion_8(dir, s, &sqrt),
        _ => Err("criteria 6 and 7 produced no outputs to compare".into()),
    };
    report("8 (determinism)", v8);
    println!("{failed} criterion line(s) failed, {unexpected} unexpectedly");
    if unexpected > 0 {
        std::process::exit(1);
    }
}
