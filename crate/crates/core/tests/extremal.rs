use proptest::prelude::*;
use spectre_core::extremal::climb;
use spectre_core::oracle::{component_milnor, random_component};
use spectre_core::{
    max_spectral, normalize_h1, random_polygon, spectrum, virtual_value, walk_direction, Bounds, Component, Error,
    Polygon, Rat, Topology,
};

mod common;

fn degenerate(seed: u64, depth: u32) -> Option<Component> {
    let c = random_component(seed, depth, Bounds::default());
    let mu = component_milnor(&c).unwrap();
    (mu > 0 && mu <= 5_000).then_some(c)
}

#[test]
fn tie_on_a_chain_edge_gives_equal_values() {
    let d = Polygon::from_triples(&[(1, 2, 2), (2, 1, 2)]).unwrap().to_diagram();
    let e = d.edges.iter().position(|e| e.a == "n1" && e.b == "n2").unwrap();
    let end = walk_direction(&d, e).unwrap();
    assert!(end == "n1" || end == "n2");
    assert_eq!(virtual_value(&d, "n1").unwrap(), virtual_value(&d, "n2").unwrap());
}

#[test]
fn unit_face_has_zero_virtual_value() {
    let d = Polygon::from_triples(&[(1, 1, 2)]).unwrap().to_diagram();
    assert_eq!(virtual_value(&d, "n1").unwrap(), Rat::zero());
}

#[test]
fn maximum_on_the_degenerate_corpus() {
    for (seed, c) in common::degenerate_components(60) {
        let d = c.build();
        let m = max_spectral(&d).unwrap();
        let sp = spectrum(&d).unwrap();
        assert_eq!(sp.max(), Some(&m.alpha), "seed {seed}");
        assert_eq!(sp.get(&m.alpha), 1, "seed {seed}");
        assert_eq!(sp.get(&-&m.alpha), 1, "seed {seed}");
        assert_eq!(virtual_value(&d, &m.witness).unwrap(), m.alpha, "seed {seed}");
        assert_eq!(max_spectral(&normalize_h1(&d).unwrap()).unwrap().alpha, m.alpha);
    }
}

#[test]
fn horizontal_steps_increase_the_virtual_value() {
    let mut steps = 0;
    for (seed, c) in common::degenerate_components(60) {
        let d = c.build();
        let t = Topology::new(&d).unwrap();
        for w in c.components() {
            let (parent, child) = (&w.attach.id, &w.component.nodes[0].id);
            let e = t.edge_between(t.vertex(parent).unwrap(), t.vertex(child).unwrap()).unwrap();
            match walk_direction(&d, e) {
                Ok(end) => {
                    assert_eq!(&end, parent);
                    let (up, down) = (virtual_value(&d, parent).unwrap(), virtual_value(&d, child).unwrap());
                    assert!(up > down, "seed {seed}: {parent} {up} vs {child} {down}");
                    steps += 1;
                }
                Err(Error::ExchangeRequired(_)) => {}
                Err(e) => panic!("seed {seed}: {e}"),
            }
        }
    }
    assert!(steps > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn vertical_steps_do_not_decrease(seed in any::<u64>()) {
        let p = random_polygon(seed, 4, 6);
        let d = p.to_diagram();
        for i in 1..p.len() {
            let e = d.edges.iter().position(|e| e.a == format!("n{i}")).unwrap();
            let end = walk_direction(&d, e).unwrap();
            let other = if end == format!("n{i}") { format!("n{}", i + 1) } else { format!("n{i}") };
            prop_assert!(virtual_value(&d, &end).unwrap() >= virtual_value(&d, &other).unwrap());
        }
    }

    #[test]
    fn polygon_maximum_is_the_selected_face(seed in any::<u64>()) {
        let p = random_polygon(seed, 4, 6);
        if p.milnor() > 0 {
            let m = max_spectral(&p.to_diagram()).unwrap();
            prop_assert_eq!(&m.alpha, &p.alpha_max().unwrap());
            let sp = p.lattice_spectrum();
            prop_assert_eq!(sp.max(), Some(&m.alpha));
            prop_assert_eq!(m.witness, format!("n{}", p.i0().unwrap()));
        }
    }

    #[test]
    fn climb_is_monotone_and_reaches_the_maximum(seed in any::<u64>(), depth in 0u32..=2) {
        if let Some(c) = degenerate(seed, depth) {
            let d = c.build();
            let path = climb(&d).unwrap();
            prop_assert!(path.windows(2).all(|w| w[0].1 < w[1].1));
            prop_assert_eq!(&path.last().unwrap().1, &max_spectral(&d).unwrap().alpha);
        }
    }

    #[test]
    fn maximum_is_root_independent(seed in any::<u64>(), depth in 1u32..=2) {
        if let Some(c) = degenerate(seed, depth) {
            let d = c.build();
            let t = Topology::new(&d).unwrap();
            let alpha = max_spectral(&d).unwrap().alpha;
            for v in t.rupture_vertices() {
                prop_assert_eq!(&max_spectral(&d.with_root(t.id(v))).unwrap().alpha, &alpha);
            }
        }
    }
}
