mod common;

use common::{p, ring};
use neron_core::algebra::Presentation;
use neron_core::neron::{
    build_stage, desingularize, find_jacobian_system_with, prepare_free_conormal, verify_certificate, DesingCertificate,
    JacobianSystem, MinorTerm, NeronConfig, Problem, StageSpec, TLayout,
};
use neron_core::{Error, Field, Poly, PolyMatrix};

fn worked(bound: u32) -> Problem {
    let r = ring(Field::Rational, &["x1", "x2", "Y1", "Y2"]);
    let b = Presentation::new(r.clone(), 2, vec![], vec![p(&r, "Y1*Y2 - x1*x2")]).unwrap();
    let base = b.base_ring();
    Problem::new(b, vec![p(&base, "x1"), p(&base, "x2")], bound).unwrap()
}

fn run(problem: &Problem) -> Result<DesingCertificate, Error> {
    desingularize(problem, &NeronConfig::default())
}

#[test]
fn taylor_remainder_of_a_square_is_t_squared() {
    // n = 1, f' = Y^2, y' = 0, s = 1, d' = x1, G(c) = 1
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
    let st = build_stage(&spec, 12).unwrap();
    assert_eq!(st.q, vec![p(&big, "T^2")]);
    assert_eq!(st.g, vec![p(&big, "T + T^2")]);
    assert_eq!(st.h, vec![p(&big, "Y - x1*T")]);
}

fn check_sum_identity(sys: &JacobianSystem, b: &Presentation) {
    let n = b.nalg();
    let jac = sys.jacobian(b);
    let mut sum = PolyMatrix::zeros(&b.ring, n, n);
    for (h, g) in sys.completed(b).unwrap() {
        // G_i H_i = M_i L_i Id
        let t = sys.terms.iter().find(|t| t.minor == h.det().unwrap()).expect("H_i has determinant M_i");
        let gh = g.mul(&h).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { &t.minor * &t.l } else { Poly::zero(&b.ring) };
                assert_eq!(gh.get(i, j), &want);
                sum.set(i, j, sum.get(i, j) + g.get(i, j));
            }
        }
    }
    // (df/dY) Σ G_i = (P Id_r | 0)
    let prod = jac.mul(&sum).unwrap();
    for i in 0..sys.r() {
        for j in 0..n {
            let want = if i == j { sys.p.clone() } else { Poly::zero(&b.ring) };
            assert_eq!(prod.get(i, j), &want, "entry ({i}, {j})");
        }
    }
}

#[test]
fn worked_example_end_to_end() {
    let cert = run(&worked(17)).unwrap();
    let report = verify_certificate(&cert);
    assert!(report.all_passed(), "{report}");
    assert!(cert.n_eff >= 1);
    let b = &cert.extended.algebra;
    assert_eq!(cert.systems.len(), 2);
    for sys in &cert.systems {
        sys.check_identities(b).unwrap();
        check_sum_identity(sys, b);
        // d = γ^e
        assert_eq!(sys.d, sys.gamma.pow(sys.exponent));
    }
    // every g - s^p b - s^p T has only terms of degree >= 2 in the stage's T
    let t = &cert.target;
    for st in &cert.stages {
        let tv = st.layout.all();
        let shared = st.layout.shared();
        let sp = st.s.pow(st.p);
        for (j, &gi) in st.g_rels.iter().enumerate() {
            let q = &(&t.relations[gi] - &(&sp * &st.b[j])) - &(&sp * &Poly::var(&t.ring, shared[j]));
            assert!(q.terms().iter().all(|(m, _)| tv.iter().map(|&v| m.exp(v)).sum::<u32>() >= 2), "{q}");
        }
    }
}

#[test]
fn worked_example_at_bound_eight_fails_the_gate() {
    assert_eq!(run(&worked(8)).unwrap_err(), Error::BoundTooSmall);
}

#[test]
fn fixed_seed_gives_identical_certificates() {
    let a = run(&worked(17)).unwrap();
    let b = run(&worked(17)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn tampered_certificate_fails() {
    let mut cert = run(&worked(17)).unwrap();
    let t = &mut cert.target;
    let k = t.relations.len() - 1;
    t.relations[k] = &t.relations[k] + &Poly::var(&t.ring, 0);
    let report = verify_certificate(&cert);
    assert!(!report.all_passed());
    assert!(report.failed().contains(&"smooth-witness"), "{report}");

    let mut cert = run(&worked(17)).unwrap();
    cert.point.values[0].rep = &cert.point.values[0].rep + &Poly::one(cert.point.values[0].rep.ring());
    assert!(verify_certificate(&cert).failed().contains(&"jets"));

    let mut cert = run(&worked(17)).unwrap();
    cert.witness = match cert.witness {
        neron_core::neron::SmoothWitness::Minor { relations, mut vars, blocks, factors, inverses, containments } => {
            vars.truncate(3);
            neron_core::neron::SmoothWitness::Minor { relations, vars, blocks, factors, inverses, containments }
        }
        w => w,
    };
    assert!(verify_certificate(&cert).failed().contains(&"smooth-witness"));
}

#[test]
fn smooth_input_short_circuits() {
    let r = ring(Field::Rational, &["x1", "x2", "Y"]);
    let b = Presentation::new(r.clone(), 2, vec![], vec![p(&r, "Y - x1")]).unwrap();
    let base = b.base_ring();
    let problem = Problem::new(b, vec![p(&base, "x1")], 8).unwrap();
    let cert = run(&problem).unwrap();
    assert!(cert.is_trivial());
    assert_eq!(cert.target, problem.algebra);
    assert!(verify_certificate(&cert).all_passed());
}

#[test]
fn cusp_with_sqrt_jet_fails_the_gate() {
    let r = ring(Field::Rational, &["x1", "x2", "Y"]);
    let b = Presentation::new(r.clone(), 2, vec![], vec![p(&r, "Y^2 - x1^2*(1 + x1)")]).unwrap();
    let base = b.base_ring();
    for (n, y) in [(1, "0"), (3, "x1 + 1/2*x1^2"), (4, "x1 + 1/2*x1^2 - 1/8*x1^3")] {
        let problem = Problem::new(b.clone(), vec![p(&base, y)], n).unwrap();
        assert_eq!(run(&problem).unwrap_err(), Error::BoundTooSmall, "N = {n}");
    }
}

#[test]
fn free_conormal_relations_are_forced_into_the_system() {
    let problem = worked(17);
    let (ext, zrels) = prepare_free_conormal(&problem).unwrap();
    assert_eq!(zrels.len(), ext.algebra.relations.len() - problem.algebra.relations.len());
    assert!(ext.residuals().iter().all(Poly::is_zero));
    // H ∩ A = (x1*x2) before the parameters are absorbed
    let gamma = p(&problem.base_ring(), "x1*x2");
    let sys = find_jacobian_system_with(&ext.algebra, &gamma, &zrels, 3, 10).unwrap();
    assert!(zrels.iter().all(|z| sys.subset.contains(z)));
    assert_eq!(sys.exponent, 1);
    sys.check_identities(&ext.algebra).unwrap();
}
