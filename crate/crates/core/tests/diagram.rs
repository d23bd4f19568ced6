use proptest::prelude::*;
use spectre_core::diagram::{edge_determinant, linking_factor, local_data, multiplicity, rupture_vertices};
use spectre_core::oracle::random_splice;
use spectre_core::{
    cut, parse_chain, random_diagram, random_polygon, spectral_pairs, spectrum, splice, validate, Arrow, Bounds, Diagram,
    Edge, Topology, Violation,
};

fn brieskorn_with_arrows(k: usize) -> Diagram {
    let mut d = Diagram::brieskorn(2, 3);
    let at = d.arrows[0].at.clone();
    d.arrows = (0..k).map(|_| Arrow::new(at.clone(), 1, 1)).collect();
    d
}

fn node_of(d: &Diagram) -> String {
    d.arrows[0].at.clone()
}

fn leaf_with_weight(d: &Diagram, w: i64) -> String {
    let e = d.edges.iter().find(|e| e.wa == 1 && e.wb == w || e.wb == 1 && e.wa == w).unwrap();
    if e.wa == 1 { e.a.clone() } else { e.b.clone() }
}

fn chain_text(faces: &[spectre_core::Face]) -> String {
    faces
        .iter()
        .map(|f| format!("({},{})[{}]", f.p, f.q, vec!["1"; f.k as usize].join(",")))
        .collect::<Vec<_>>()
        .join(" – ")
}

#[test]
fn brieskorn_multiplicities_and_linking() {
    let d = Diagram::brieskorn(2, 3);
    let v = node_of(&d);
    assert_eq!(linking_factor(&d, &v, 0).unwrap(), 6);
    assert_eq!(linking_factor(&d, &leaf_with_weight(&d, 2), 0).unwrap(), 3);
    assert_eq!(multiplicity(&d, &v).unwrap(), 6);
    assert_eq!(multiplicity(&d, &leaf_with_weight(&d, 3)).unwrap(), 2);
    assert_eq!(multiplicity(&brieskorn_with_arrows(2), &v).unwrap(), 12);
    assert_eq!(rupture_vertices(&d).unwrap(), vec![v]);
}

#[test]
fn brieskorn_local_data() {
    let d = Diagram::brieskorn(2, 3);
    let ld = local_data(&d, &node_of(&d)).unwrap();
    let mut cut: Vec<(i64, i64, i64)> = ld.incidences.iter().map(|x| (x.alpha, x.m, x.s)).collect();
    cut.sort();
    assert_eq!(cut, vec![(1, 1, 1), (2, 0, -3), (3, 0, -4)]);
    assert_eq!((ld.m_v, ld.r_v, ld.d_v), (6, 1, None));
}

#[test]
fn leaf_edge_determinant_is_negative() {
    let d = Diagram::brieskorn(2, 3);
    let e = d.edges.iter().position(|e| e.wa.max(e.wb) == 2).unwrap();
    assert_eq!(edge_determinant(&d, e).unwrap(), -1);
}

#[test]
fn vertex_without_rupture_has_none() {
    let d = Diagram::new(vec!["v".into(), "l".into()], vec![Edge::new("v", "l", 1, 1)], vec![Arrow::new("v", 1, 1)], "v");
    assert!(rupture_vertices(&d).unwrap().is_empty());
}

#[test]
fn splice_along_the_only_arrows_is_rejected() {
    let d = Diagram::brieskorn(2, 3);
    assert!(splice(&d, 0, &d, 0).is_err());
}

#[test]
fn zero_determinant_is_a_violation() {
    let mut d = Diagram::brieskorn(2, 3);
    let v = node_of(&d);
    for e in &mut d.edges {
        if e.a == v && e.wa == 3 {
            e.wa = 2;
        }
        if e.b == v && e.wb == 3 {
            e.wb = 2;
        }
    }
    assert!(validate(&d).violations.iter().any(|v| matches!(v, Violation::ZeroDeterminant { .. })));
    let cycle = Diagram::new(
        vec!["a".into(), "b".into()],
        vec![Edge::new("a", "b", 2, 3), Edge::new("b", "a", 3, 2)],
        vec![Arrow::new("a", 1, 1)],
        "a",
    );
    assert!(validate(&cycle).violations.iter().any(|v| matches!(v, Violation::Cycle { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn local_data_congruences(seed in any::<u64>(), depth in 0u32..=2) {
        let d = random_diagram(seed, depth, Bounds::default());
        let t = Topology::new(&d).unwrap();
        for v in 0..t.vertex_count() {
            let ld = t.local_data(v).unwrap();
            let alphas: Vec<i64> = ld.incidences.iter().map(|x| x.alpha).collect();
            let mut rebuilt = 0i128;
            for (j, x) in ld.incidences.iter().enumerate() {
                let others: i128 = alphas.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, a)| *a as i128).product();
                prop_assert!(0 <= x.beta && (x.beta < x.alpha || x.alpha == 1));
                prop_assert_eq!((x.beta as i128 * others).rem_euclid(x.alpha as i128), 1 % x.alpha as i128);
                prop_assert_eq!((x.m - x.beta * ld.m_v).rem_euclid(x.alpha), 0);
                prop_assert_eq!(x.s * x.alpha, x.m - x.beta * ld.m_v);
                prop_assert_eq!(x.s % ld.r_v, 0);
                rebuilt += x.m as i128 * others;
            }
            prop_assert_eq!(rebuilt, ld.m_v as i128);
            prop_assert_eq!(ld.m_v % ld.r_v, 0);
            if let Some(dv) = ld.d_v {
                prop_assert_eq!(ld.m_v % dv, 0);
            }
        }
    }

    #[test]
    fn polygon_diagram_multiplicities(seed in any::<u64>()) {
        let p = random_polygon(seed, 4, 6);
        let d = p.to_diagram();
        let x = p.vertices();
        for (i, f) in p.faces().iter().enumerate() {
            let id = format!("n{}", i + 1);
            let (m, n) = x[i + 1];
            prop_assert_eq!(multiplicity(&d, &id).unwrap(), f.q * m + f.p * n);
        }
        let t = Topology::new(&d).unwrap();
        for (i, delta) in p.deltas().into_iter().enumerate() {
            prop_assert_eq!(t.edge_determinant(i + 1).unwrap(), delta);
        }
        prop_assert_eq!(parse_chain(&chain_text(p.faces())).unwrap(), d);
    }

    #[test]
    fn splice_is_symmetric(seed in any::<u64>()) {
        let inst = random_splice(seed, 1, Bounds::default());
        let ab = splice(&inst.first, inst.first_arrow, &inst.second, inst.second_arrow).unwrap();
        let ba = splice(&inst.second, inst.second_arrow, &inst.first, inst.first_arrow).unwrap();
        let mults = |d: &Diagram| {
            let t = Topology::new(d).unwrap();
            let mut m: Vec<i64> = (0..t.vertex_count()).map(|v| t.multiplicity(v)).collect();
            m.sort();
            m
        };
        prop_assert_eq!(mults(&ab), mults(&ba));
        prop_assert_eq!(spectral_pairs(&ab).unwrap(), spectral_pairs(&ba).unwrap());
    }

    #[test]
    fn cut_keeps_multiplicities_and_splice_restores(seed in any::<u64>()) {
        let inst = random_splice(seed, 1, Bounds::default());
        let whole = Topology::new(&inst.whole).unwrap();
        for half in [&inst.first, &inst.second] {
            let t = Topology::new(half).unwrap();
            for v in 0..t.vertex_count() {
                prop_assert_eq!(t.multiplicity(v), whole.multiplicity(whole.vertex(t.id(v)).unwrap()));
            }
        }
        let back = splice(&inst.first, inst.first_arrow, &inst.second, inst.second_arrow).unwrap();
        prop_assert_eq!(spectrum(&back).unwrap(), spectrum(&inst.whole).unwrap());
        let again = cut(&inst.whole, inst.edge).unwrap();
        prop_assert_eq!(again.first, inst.first);
    }
}
