//! Certificate files: the problem header followed by `[section]` blocks.
//!
//! A trivial certificate carries `[log]`, `[witness elkik]` and `[point]` only; its
//! `B'` is the input algebra. Otherwise the file lists the extended algebra, both
//! Jacobian systems, `B'`, both stages, the map `B -> B'`, the smoothness witness
//! and the jets of the point `B' -> A'`.

use neron_core::algebra::Presentation;
use neron_core::jets::{JetPoint, JetSeries};
use neron_core::neron::{
    Branch, Containment, DesingCertificate, JacobianSystem, MinorTerm, Problem, Proof, SmoothWitness, StageRecord,
    StepLog, TLayout,
};
use neron_core::smooth::SmoothCertificate;
use neron_core::{Poly, RingRef};

use crate::problem::{self, header, join, map_line, order_name, Header, PROBLEM_KEYS};
use crate::text::{parse_num, parse_poly, sections, Line, ParseResult, Section};

fn ints(v: &[usize]) -> String {
    v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn var_names(ring: &RingRef, v: &[usize]) -> String {
    v.iter().map(|&i| ring.var_name(i).to_string()).collect::<Vec<_>>().join(" ")
}

fn push(out: &mut String, line: impl AsRef<str>) {
    let line = line.as_ref();
    out.push_str(line.trim_end());
    out.push('\n');
}

fn write_algebra(out: &mut String, b: &Presentation, one_per_line: bool) {
    if let Some(o) = order_name(b.ring.order()) {
        push(out, format!("order {o}"));
    }
    push(out, format!("vars {}", b.algebra_names().join(" ")));
    if one_per_line {
        for r in &b.relations {
            push(out, format!("ideal: {r}"));
        }
    } else {
        push(out, format!("ideal: {}", join(&b.relations)));
    }
}

fn write_system(out: &mut String, s: &JacobianSystem) {
    push(out, "[system]");
    push(out, format!("subset {}", ints(&s.subset)));
    push(out, format!("gamma: {}", s.gamma));
    push(out, format!("exponent {}", s.exponent));
    push(out, format!("d: {}", s.d));
    push(out, format!("p: {}", s.p));
    push(out, format!("p_hat: {}", s.p_hat));
    for t in &s.terms {
        push(out, format!("term: {} | {} | {} | {}", ints(&t.cols), t.sign, t.minor, t.l));
    }
}

fn write_stage(out: &mut String, st: &StageRecord, ring: &RingRef) {
    push(out, "[stage]");
    push(out, format!("centers: {}", join(&st.centers)));
    push(out, format!("unknowns {}", var_names(ring, &st.unknowns)));
    push(out, format!("layout {} {} {}", st.layout.r, st.layout.q, st.layout.n));
    for v in &st.layout.vars {
        push(out, format!("slots {}", var_names(ring, v)));
    }
    push(out, format!("d: {}", st.d));
    push(out, format!("power {}", st.p));
    push(out, format!("s: {}", st.s));
    push(out, format!("b: {}", join(&st.b)));
    push(out, format!("s1: {}", st.s1));
    push(out, format!("s2: {}", st.s2));
    push(out, format!("unit: {}", st.unit));
    push(out, format!("w {}", ring.var_name(st.w)));
    push(out, format!("h {}", ints(&st.h_rels)));
    push(out, format!("g {}", ints(&st.g_rels)));
    push(out, format!("w_rel {}", st.w_rel));
}

fn write_witness(out: &mut String, w: &SmoothWitness, ring: &RingRef) {
    match w {
        SmoothWitness::Elkik(sc) => {
            push(out, "[witness elkik]");
            push(out, format!("subset {}", ints(&sc.subset)));
            for (c, cols, m) in &sc.factors {
                push(out, format!("factor: {} | {} | {}", ints(cols), c, m));
            }
            for c in &sc.coefficients {
                push(out, format!("coefficient: {c}"));
            }
        }
        SmoothWitness::Minor { relations, vars, blocks, factors, inverses, containments } => {
            push(out, "[witness minor]");
            push(out, format!("relations {}", ints(relations)));
            push(out, format!("vars {}", var_names(ring, vars)));
            push(out, format!("blocks {}", ints(blocks)));
            for (f, e) in factors {
                push(out, format!("factor: {e} | {f}"));
            }
            push(out, format!("inverses {}", ints(inverses)));
            for c in containments {
                match &c.proof {
                    Proof::Substitution { solved, scale, power, combination, modulus } => {
                        push(out, format!("contain {} substitution", c.relation));
                        let s: Vec<String> = solved.iter().map(|(v, r)| format!("{}:{}", ring.var_name(*v), r)).collect();
                        push(out, format!("  solved {}", s.join(" ")));
                        push(out, format!("  scale: {scale}"));
                        push(out, format!("  power {power}"));
                        for (i, a) in combination {
                            push(out, format!("  comb: {i} | {a}"));
                        }
                        push(out, format!("  modulus {}", ints(modulus)));
                    }
                    Proof::Combination(comb) => {
                        push(out, format!("contain {} combination", c.relation));
                        for (i, a) in comb {
                            push(out, format!("  comb: {i} | {a}"));
                        }
                    }
                    Proof::Groebner => push(out, format!("contain {} groebner", c.relation)),
                }
            }
        }
    }
}

fn write_log(out: &mut String, log: &StepLog) {
    push(out, "[log]");
    if log.trivial {
        push(out, "trivial");
    }
    if let Some(b) = log.branch {
        push(out, format!("branch {}", if b == Branch::Base { "base" } else { "evaluated" }));
    }
    if let Some(g) = &log.gamma {
        push(out, format!("gamma: {g}"));
    }
    if let Some(g) = &log.gamma_p {
        push(out, format!("gamma_p: {g}"));
    }
    if let Some([a, b]) = log.t {
        push(out, format!("t {a} {b}"));
    }
    if log.symmetric {
        push(out, "symmetric");
    }
    for n in &log.notes {
        push(out, format!("note: {}", n.replace(['\n', '#'], " ")));
    }
}

/// The certificate as text; equal certificates give identical bytes.
pub fn write_certificate(cert: &DesingCertificate) -> String {
    let mut out = String::new();
    out.push_str(&problem::print_problem(&cert.input));
    out.push('\n');
    write_log(&mut out, &cert.log);
    let t = &cert.target;
    if !cert.log.trivial {
        out.push('\n');
        push(&mut out, "[extended]");
        push(&mut out, format!("bound {}", cert.extended.bound));
        write_algebra(&mut out, &cert.extended.algebra, false);
        out.push_str(&map_line(&cert.extended.algebra.algebra_names(), &cert.extended.approx));
        for s in &cert.systems {
            out.push('\n');
            write_system(&mut out, s);
        }
        out.push('\n');
        push(&mut out, "[target]");
        write_algebra(&mut out, t, true);
        for st in &cert.stages {
            out.push('\n');
            write_stage(&mut out, st, &t.ring);
        }
        out.push('\n');
        push(&mut out, "[maps]");
        out.push_str(&map_line(&cert.extended.algebra.algebra_names(), &cert.maps));
    }
    out.push('\n');
    write_witness(&mut out, &cert.witness, &t.ring);
    out.push('\n');
    push(&mut out, "[point]");
    push(&mut out, format!("n_eff {}", cert.n_eff));
    for (name, v) in cert.point.names.iter().zip(&cert.point.values) {
        push(&mut out, format!("jet: {name} | {} | {}", v.prec, v.rep));
    }
    out
}

/// `|`-separated fields of a line, with their offsets.
fn fields(l: &Line, n: usize) -> ParseResult<Vec<(usize, String)>> {
    let p = l.pieces('|');
    if p.len() != n {
        return l.err_at(0, format!("expected {n} fields separated by `|`, found {}", p.len()));
    }
    Ok(p.into_iter()
        .map(|(o, s)| {
            let lead = s.chars().take_while(|c| c.is_whitespace()).count();
            (o + lead, s.trim().to_string())
        })
        .collect())
}

fn field_poly(l: &Line, f: &(usize, String), ring: &RingRef) -> ParseResult<Poly> {
    parse_poly(l, f.0, &f.1, ring)
}

fn field_ints(l: &Line, f: &(usize, String)) -> ParseResult<Vec<usize>> {
    f.1.split_whitespace().map(|w| parse_num(l, f.0, w)).collect()
}

fn var_index(l: &Line, offset: usize, name: &str, ring: &RingRef) -> ParseResult<usize> {
    ring.var_index(name).map_or_else(|| l.err_at(offset, format!("unknown variable `{name}`")), Ok)
}

fn var_list(l: &Line, ring: &RingRef) -> ParseResult<Vec<usize>> {
    l.words().into_iter().map(|(o, w)| var_index(l, o, w, ring)).collect()
}

fn in_range(l: &Line, v: &[usize], n: usize, what: &str) -> ParseResult<()> {
    match v.iter().find(|&&i| i >= n) {
        Some(i) => l.err_at(0, format!("{what} index {i} out of range (there are {n})")),
        None => Ok(()),
    }
}

fn read_log(sec: &Section, base: &RingRef) -> ParseResult<StepLog> {
    sec.only(&["trivial", "branch", "gamma", "gamma_p", "t", "symmetric", "note"])?;
    let branch = match sec.get("branch")? {
        None => None,
        Some(l) if l.value == "base" => Some(Branch::Base),
        Some(l) if l.value == "evaluated" => Some(Branch::Evaluated),
        Some(l) => return l.err_at(0, "expected `base` or `evaluated`"),
    };
    let t = match sec.get("t")? {
        None => None,
        Some(l) => match l.usize_list()?.as_slice() {
            [a, b] => Some([*a as u32, *b as u32]),
            _ => return l.err_at(0, "expected two exponents"),
        },
    };
    Ok(StepLog {
        trivial: sec.get("trivial")?.is_some(),
        branch,
        gamma: sec.get("gamma")?.map(|l| l.poly(base)).transpose()?,
        gamma_p: sec.get("gamma_p")?.map(|l| l.poly(base)).transpose()?,
        t,
        symmetric: sec.get("symmetric")?.is_some(),
        notes: sec.all("note").map(|l| l.value.clone()).collect(),
    })
}

fn read_algebra(sec: &Section, h: &Header, input: &Presentation) -> ParseResult<Presentation> {
    let h = Header {
        field: h.field,
        order: match sec.get("order")? {
            Some(l) => problem::parse_order(l)?,
            None => neron_core::MonomialOrder::DegRevLex,
        },
        base: h.base.clone(),
    };
    let mut b = problem::algebra(sec, &h)?;
    b.base_ideal = input.base_ideal.iter().map(|p| p.map_to(&b.ring).unwrap()).collect();
    Ok(b)
}

fn read_extended(sec: &Section, h: &Header, input: &Problem) -> ParseResult<Problem> {
    sec.only(&["bound", "order", "vars", "ideal", "map"])?;
    let b = read_algebra(sec, h, &input.algebra)?;
    let bound: u32 = sec.need("bound")?.single()?;
    let images = problem::maps(sec, &b.algebra_names(), &b.base_ring())?;
    Problem::new(b, images, bound).or_else(|e| sec.err(e.to_string()))
}

fn read_system(sec: &Section, b: &Presentation) -> ParseResult<JacobianSystem> {
    sec.only(&["subset", "gamma", "exponent", "d", "p", "p_hat", "term"])?;
    let ring = &b.ring;
    let sl = sec.need("subset")?;
    let subset = sl.usize_list()?;
    in_range(sl, &subset, b.relations.len(), "relation")?;
    let mut terms = Vec::new();
    for l in sec.all("term") {
        let f = fields(l, 4)?;
        let cols = field_ints(l, &f[0])?;
        in_range(l, &cols, b.nalg(), "column")?;
        let sign: i32 = parse_num(l, f[1].0, &f[1].1)?;
        terms.push(MinorTerm { cols, sign, minor: field_poly(l, &f[2], ring)?, l: field_poly(l, &f[3], ring)? });
    }
    Ok(JacobianSystem {
        subset,
        gamma: sec.need("gamma")?.poly(ring)?,
        exponent: sec.need("exponent")?.single()?,
        d: sec.need("d")?.poly(ring)?,
        terms,
        p: sec.need("p")?.poly(ring)?,
        p_hat: sec.need("p_hat")?.poly(ring)?,
    })
}

fn read_stage(sec: &Section, t: &Presentation) -> ParseResult<StageRecord> {
    sec.only(&[
        "centers", "unknowns", "layout", "slots", "d", "power", "s", "b", "s1", "s2", "unit", "w", "h", "g", "w_rel",
    ])?;
    let ring = &t.ring;
    let nrel = t.relations.len();
    let ll = sec.need("layout")?;
    let (r, q, n) = match ll.usize_list()?.as_slice() {
        [r, q, n] => (*r, *q, *n),
        _ => return ll.err_at(0, "expected `r q n`"),
    };
    let mut vars = Vec::new();
    for l in sec.all("slots") {
        let v = var_list(l, ring)?;
        if v.len() != n {
            return l.err_at(0, format!("expected {n} slot variables"));
        }
        vars.push(v);
    }
    if vars.len() != q {
        return ll.err_at(0, format!("expected {q} `slots` lines, found {}", vars.len()));
    }
    let idx = |key: &str| -> ParseResult<Vec<usize>> {
        let l = sec.need(key)?;
        let v = l.usize_list()?;
        in_range(l, &v, nrel, "relation")?;
        Ok(v)
    };
    let wl = sec.need("w")?;
    let wr = sec.need("w_rel")?;
    let w_rel: usize = wr.single()?;
    in_range(wr, &[w_rel], nrel, "relation")?;
    Ok(StageRecord {
        centers: sec.need("centers")?.polys(ring)?,
        unknowns: var_list(sec.need("unknowns")?, ring)?,
        layout: TLayout { r, q, n, vars },
        d: sec.need("d")?.poly(ring)?,
        p: sec.need("power")?.single()?,
        s: sec.need("s")?.poly(ring)?,
        b: sec.need("b")?.polys(ring)?,
        s1: sec.need("s1")?.poly(ring)?,
        s2: sec.need("s2")?.poly(ring)?,
        unit: sec.need("unit")?.poly(ring)?,
        w: var_index(wl, 0, wl.value.trim(), ring)?,
        h_rels: idx("h")?,
        g_rels: idx("g")?,
        w_rel,
    })
}

fn comb(l: &Line, ring: &RingRef, nrel: usize) -> ParseResult<(usize, Poly)> {
    let f = fields(l, 2)?;
    let i: usize = parse_num(l, f[0].0, &f[0].1)?;
    in_range(l, &[i], nrel, "relation")?;
    Ok((i, field_poly(l, &f[1], ring)?))
}

fn current<'a>(containments: &'a mut [(Line, Containment)], l: &Line) -> ParseResult<&'a mut Proof> {
    match containments.last_mut() {
        Some((_, c)) => Ok(&mut c.proof),
        None => l.err(format!("`{}` outside a `contain` block", l.key)),
    }
}

fn read_minor(sec: &Section, t: &Presentation) -> ParseResult<SmoothWitness> {
    let ring = &t.ring;
    let nrel = t.relations.len();
    let mut relations = None;
    let mut vars = None;
    let mut blocks = None;
    let mut factors = Vec::new();
    let mut inverses = None;
    let mut containments: Vec<(Line, Containment)> = Vec::new();
    for l in &sec.lines {
        match l.key.as_str() {
            "relations" => {
                let v = l.usize_list()?;
                in_range(l, &v, nrel, "relation")?;
                relations = Some(v);
            }
            "vars" => vars = Some(var_list(l, ring)?),
            "blocks" => blocks = Some(l.usize_list()?),
            "factor" => {
                let f = fields(l, 2)?;
                let e: u32 = parse_num(l, f[0].0, &f[0].1)?;
                factors.push((field_poly(l, &f[1], ring)?, e));
            }
            "inverses" => {
                let v = l.usize_list()?;
                in_range(l, &v, nrel, "relation")?;
                inverses = Some(v);
            }
            "contain" => {
                let w = l.words();
                let [(o, idx), (ko, kind)] = w.as_slice() else {
                    return l.err_at(0, "expected `contain <relation> <substitution|combination|groebner>`");
                };
                let relation: usize = parse_num(l, *o, idx)?;
                in_range(l, &[relation], nrel, "relation")?;
                let proof = match *kind {
                    "substitution" => Proof::Substitution {
                        solved: Vec::new(),
                        scale: Poly::one(ring),
                        power: 0,
                        combination: Vec::new(),
                        modulus: Vec::new(),
                    },
                    "combination" => Proof::Combination(Vec::new()),
                    "groebner" => Proof::Groebner,
                    other => return l.err_at(*ko, format!("unknown proof kind `{other}`")),
                };
                containments.push((l.clone(), Containment { relation, proof }));
            }
            "comb" => {
                let c = comb(l, ring, nrel)?;
                match current(&mut containments, l)? {
                    Proof::Substitution { combination, .. } => combination.push(c),
                    Proof::Combination(v) => v.push(c),
                    Proof::Groebner => return l.err("`comb` in a groebner proof"),
                }
            }
            "solved" | "scale" | "power" | "modulus" => {
                let Proof::Substitution { solved, scale, power, modulus, .. } = current(&mut containments, l)? else {
                    return l.err(format!("`{}` outside a substitution proof", l.key));
                };
                match l.key.as_str() {
                    "solved" => {
                        for (o, w) in l.words() {
                            let Some((v, r)) = w.split_once(':') else {
                                return l.err_at(o, "expected `variable:relation`");
                            };
                            let r: usize = parse_num(l, o + v.len() + 1, r)?;
                            in_range(l, &[r], nrel, "relation")?;
                            solved.push((var_index(l, o, v, ring)?, r));
                        }
                    }
                    "scale" => *scale = l.poly(ring)?,
                    "power" => *power = l.single()?,
                    _ => {
                        let v = l.usize_list()?;
                        in_range(l, &v, nrel, "relation")?;
                        *modulus = v;
                    }
                }
            }
            other => return l.err(format!("unexpected `{other}` in [witness minor]")),
        }
    }
    let missing = |k: &str| sec.err::<SmoothWitness>(format!("missing `{k}` in [witness minor]"));
    let (Some(relations), Some(vars), Some(blocks), Some(inverses)) = (relations, vars, blocks, inverses) else {
        return missing("relations`, `vars`, `blocks` or `inverses");
    };
    Ok(SmoothWitness::Minor {
        relations,
        vars,
        blocks,
        factors,
        inverses,
        containments: containments.into_iter().map(|(_, c)| c).collect(),
    })
}

fn read_elkik(sec: &Section, t: &Presentation) -> ParseResult<SmoothWitness> {
    sec.only(&["subset", "factor", "coefficient"])?;
    let ring = &t.ring;
    let sl = sec.need("subset")?;
    let subset = sl.usize_list()?;
    in_range(sl, &subset, t.relations.len(), "relation")?;
    let mut factors = Vec::new();
    for l in sec.all("factor") {
        let f = fields(l, 3)?;
        let cols = field_ints(l, &f[0])?;
        in_range(l, &cols, t.nalg(), "column")?;
        factors.push((field_poly(l, &f[1], ring)?, cols, field_poly(l, &f[2], ring)?));
    }
    let coefficients = sec.all("coefficient").map(|l| l.poly(ring)).collect::<ParseResult<_>>()?;
    Ok(SmoothWitness::Elkik(SmoothCertificate { subset, factors, coefficients }))
}

fn read_point(sec: &Section, base: &RingRef) -> ParseResult<(JetPoint, u32)> {
    sec.only(&["n_eff", "jet"])?;
    let mut point = JetPoint::default();
    for l in sec.all("jet") {
        let f = fields(l, 3)?;
        if point.get(&f[0].1).is_some() {
            return l.err_at(f[0].0, format!("`{}` has two jets", f[0].1));
        }
        let prec: u32 = parse_num(l, f[1].0, &f[1].1)?;
        point.set(&f[0].1, JetSeries { rep: field_poly(l, &f[2], base)?, prec });
    }
    Ok((point, sec.need("n_eff")?.single()?))
}

/// Reads a certificate written by [`write_certificate`].
pub fn read_certificate(text: &str) -> ParseResult<DesingCertificate> {
    let secs = sections(text)?;
    let head = &secs[0];
    head.only(PROBLEM_KEYS)?;
    let input = problem::problem_from(head, None)?;
    let h = header(head)?;
    let base = input.base_ring();
    let find = |name: &str| -> Vec<&Section> { secs.iter().skip(1).filter(|s| s.name == name).collect() };
    let unique = |name: &str| -> ParseResult<Option<&Section>> {
        let all = find(name);
        let first = all.first().copied();
        if let Some(dup) = all.get(1) {
            return dup.err(format!("duplicate section [{name}]"));
        }
        Ok(first)
    };
    let known = ["log", "extended", "system", "target", "stage", "maps", "witness", "point"];
    if let Some(s) = secs.iter().skip(1).find(|s| !known.contains(&s.name.as_str())) {
        return s.err(format!("unknown section [{}]", s.name));
    }
    let need = |name: &str| -> ParseResult<&Section> {
        unique(name)?.map_or_else(|| head.err(format!("missing section [{name}]")), Ok)
    };
    let log = read_log(need("log")?, &base)?;
    let (extended, systems, target, stages, maps) = if log.trivial {
        for name in ["extended", "system", "target", "stage", "maps"] {
            if let Some(s) = find(name).first() {
                return s.err(format!("a trivial certificate has no [{name}] section"));
            }
        }
        let b = &input.algebra;
        let maps = b.algebra_vars().iter().map(|&v| Poly::var(&b.ring, v)).collect();
        (input.clone(), Vec::new(), b.clone(), Vec::new(), maps)
    } else {
        let extended = read_extended(need("extended")?, &h, &input)?;
        let systems = find("system").into_iter().map(|s| read_system(s, &extended.algebra)).collect::<ParseResult<Vec<_>>>()?;
        let ts = need("target")?;
        ts.only(&["order", "vars", "ideal"])?;
        let target = read_algebra(ts, &h, &input.algebra)?;
        let stages = find("stage").into_iter().map(|s| read_stage(s, &target)).collect::<ParseResult<Vec<_>>>()?;
        let ms = need("maps")?;
        ms.only(&["map"])?;
        let maps = problem::maps(ms, &extended.algebra.algebra_names(), &target.ring)?;
        (extended, systems, target, stages, maps)
    };
    let ws = need("witness")?;
    let witness = match ws.args.as_slice() {
        [k] if k == "minor" => read_minor(ws, &target)?,
        [k] if k == "elkik" => read_elkik(ws, &target)?,
        _ => return ws.err("expected [witness minor] or [witness elkik]"),
    };
    let (point, n_eff) = read_point(need("point")?, &base)?;
    Ok(DesingCertificate { input, extended, log, systems, stages, target, maps, witness, point, n_eff })
}
