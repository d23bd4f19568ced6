use proptest::prelude::*;
use spectre_core::oracle::naive_defect_of;
use spectre_core::{
    global_defect, hertling_verdict, nd_defect, random_polygon, spectrum, variance, Diagram, Error, Polygon, Rat,
    SpecBag, Verdict,
};

mod common;

fn poly(f: &[(i64, i64, i64)]) -> Polygon {
    Polygon::from_triples(f).unwrap()
}

#[test]
fn variance_examples() {
    let two: SpecBag = [(Rat::new(-1, 6), 1), (Rat::new(1, 6), 1)].into_iter().collect();
    assert_eq!(variance(&two).unwrap(), Rat::new(1, 36));
    let sp = spectrum(&poly(&[(1, 2, 2), (2, 1, 2)]).to_diagram()).unwrap();
    assert_eq!(variance(&sp).unwrap(), Rat::new(19, 234));
    let flat: SpecBag = [(Rat::zero(), 5)].into_iter().collect();
    assert_eq!(variance(&flat).unwrap(), Rat::zero());
    assert!(matches!(variance(&SpecBag::new()), Err(Error::EmptySpectrum)));
}

#[test]
fn non_degenerate_defect_examples() {
    let r = nd_defect(&poly(&[(2, 3, 1)])).unwrap();
    assert!(r.defect.is_zero() && r.edge_terms.is_empty());
    let r = nd_defect(&poly(&[(1, 2, 2), (3, 1, 1)])).unwrap();
    assert!(r.defect.is_zero());
    assert_eq!(r.edge_terms.len(), 1);
    assert!(r.edge_terms[0].e.is_zero());
    assert_eq!(r.verdict, Verdict::Equality);
}

#[test]
fn hertling_examples() {
    let h = hertling_verdict(&Diagram::brieskorn(2, 3)).unwrap();
    assert_eq!((h.variance, h.bound, h.verdict), (Rat::new(1, 36), Rat::new(1, 36), Verdict::Equality));
    let h = hertling_verdict(&poly(&[(1, 2, 2), (2, 1, 2)]).to_diagram()).unwrap();
    assert_eq!((h.variance, h.bound, h.verdict), (Rat::new(19, 234), Rat::new(1, 12), Verdict::Strict));
    let h = hertling_verdict(&poly(&[(1, 2, 2), (3, 1, 1)]).to_diagram()).unwrap();
    assert_eq!(h.verdict, Verdict::Equality);
}

#[test]
fn degenerate_corpus_defects() {
    for (seed, d) in common::degenerate_diagrams(60) {
        let sp = spectrum(&d).unwrap();
        let r = global_defect(&d).unwrap();
        assert_eq!(r.defect, naive_defect_of(&sp).unwrap(), "seed {seed}");
        assert_eq!(r.edge_sum(), r.defect, "seed {seed}");
        assert!(r.edge_terms.iter().all(|t| !t.e.is_negative() && t.delta > 0), "seed {seed}");
        assert_eq!(r.defect.is_zero(), r.edge_terms.iter().all(|t| t.e.is_zero()), "seed {seed}");
        let h = hertling_verdict(&d).unwrap();
        assert_eq!(h.verdict, r.verdict, "seed {seed}");
        assert_eq!(h.variance, variance(&sp).unwrap(), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn report_fields_are_consistent(seed in any::<u64>()) {
        let p = random_polygon(seed, 4, 6);
        if p.milnor() > 0 {
            let r = nd_defect(&p).unwrap();
            let mu = Rat::from_int(r.mu);
            prop_assert_eq!(r.mu, p.milnor());
            prop_assert_eq!(&r.defect, &(Rat::from_int(6) * &r.s - &mu * &r.alpha_max));
            prop_assert_eq!(&r.variance, &(&r.s / &mu));
            prop_assert_eq!(&r.bound, &((&r.alpha_max - &r.alpha_min) / Rat::from_int(12)));
            prop_assert_eq!(&r.variance, &variance(&p.lattice_spectrum()).unwrap());
            prop_assert_eq!(&r.defect, &naive_defect_of(&p.lattice_spectrum()).unwrap());
            prop_assert!(!r.defect.is_positive());
            prop_assert_eq!(global_defect(&p.to_diagram()).unwrap().defect, r.defect);
        }
    }

    #[test]
    fn face_values_differ_by_the_edge_term(seed in any::<u64>()) {
        let p = random_polygon(seed, 4, 6);
        let (f, x) = (p.faces(), p.vertices());
        for i in 1..p.len() {
            let (m, n) = x[i];
            let (a, b) = (f[i - 1], f[i]);
            let lhs = Rat::new((n - m) * p.deltas()[i - 1], (a.p * n + a.q * m) * (b.p * n + b.q * m));
            prop_assert_eq!(lhs, p.phi(i, 1, 1) - p.phi(i + 1, 1, 1));
        }
    }
}
