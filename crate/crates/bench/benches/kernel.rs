use criterion::{black_box, criterion_group, criterion_main, Criterion};
use neron_bench::{cyclic4, polys, ring, worked};
use neron_core::groebner::GroebnerBasis;
use neron_core::jets::{hensel_lift, JetPoint, JetRing, JetSeries};
use neron_core::neron::{desingularize, verify_certificate, NeronConfig};
use neron_core::smooth::smooth_locus;
use neron_core::{Field, Poly};

fn groebner(c: &mut Criterion) {
    for (name, field) in [("cyclic4/q", Field::Rational), ("cyclic4/gf32003", Field::Prime(32003))] {
        let (r, g) = cyclic4(field);
        c.bench_function(name, |b| b.iter(|| GroebnerBasis::new(&r, black_box(&g))));
    }
}

fn hensel(c: &mut Criterion) {
    let base = ring(Field::Rational, &["x1", "x2"]);
    let amb = ring(Field::Rational, &["x1", "x2", "Y"]);
    let f = polys(&amb, &["Y^2 - 1 - x1 - x2"]);
    let jr = JetRing::new(&base, &[]);
    let mut pt = JetPoint::default();
    pt.set("Y", JetSeries { rep: Poly::one(&base), prec: 1 });
    let names = ["Y".to_string()];
    c.bench_function("hensel/sqrt-prec16", |b| b.iter(|| hensel_lift(&jr, &f, &pt, &names, 16).unwrap()));
}

fn pipeline(c: &mut Criterion) {
    let p = worked(17);
    let config = NeronConfig::default();
    c.bench_function("smooth-locus/worked", |b| b.iter(|| smooth_locus(&p.algebra, 3)));
    let mut g = c.benchmark_group("neron");
    g.sample_size(10);
    g.bench_function("desingularize/worked-n17", |b| b.iter(|| desingularize(&p, &config).unwrap()));
    let cert = desingularize(&p, &config).unwrap();
    g.bench_function("verify/worked-n17", |b| b.iter(|| verify_certificate(&cert)));
    g.finish();
}

criterion_group!(benches, groebner, hensel, pipeline);
criterion_main!(benches);
