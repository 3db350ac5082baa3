use criterion::{black_box, criterion_group, criterion_main, Criterion};

use pgf_bench::dataset;
use pgf_core::family::{eval_cert, Cert};
use pgf_core::{ops, Limits, PermGroup};

fn schreier_sims(c: &mut Criterion) {
    let limits = Limits::default();
    for text in ["W(W(C(2,1),C(2,1)),C(2,2))", "W(W(C(3,1),C(3,1)),C(3,1))", "W(C(5,1),C(5,1))"] {
        let g = eval_cert(&text.parse::<Cert>().unwrap(), &limits).unwrap().group;
        let gens = g.generators().to_vec();
        c.bench_function(&format!("chain {text}"), |b| {
            b.iter(|| PermGroup::new(g.degree(), black_box(gens.clone())).unwrap().order())
        });
    }
}

fn collection(c: &mut Criterion) {
    let recs = dataset(243);
    let p = &recs[recs.len() / 2].presentation;
    let n = p.order().unwrap() as usize;
    let elems: Vec<_> = (0..n).step_by(7).map(|i| p.element_at(i)).collect();
    c.bench_function("collect products in a group of order 243", |b| {
        b.iter(|| {
            elems
                .iter()
                .zip(elems.iter().rev())
                .map(|(x, y)| p.multiply(x, y).0[0])
                .sum::<u32>()
        })
    });
    let limits = Limits::default();
    c.bench_function("regular representation, order 243", |b| {
        b.iter(|| p.to_perm_group(&limits).unwrap().order())
    });
}

fn invariants(c: &mut Criterion) {
    let g = eval_cert(&"W(C(5,1),C(5,1))".parse::<Cert>().unwrap(), &Limits::default()).unwrap().group;
    c.bench_function("lower central series of C5 wr C5", |b| {
        b.iter(|| ops::lower_central_series(&g).unwrap().factor_ranks)
    });
}

criterion_group!(benches, schreier_sims, collection, invariants);
criterion_main!(benches);
