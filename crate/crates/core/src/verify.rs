use serde::Serialize;

use crate::decomposition::{decompose_component, psi_minus, psi_plus, sppa_with};
use crate::diagram::{splice, Diagram, Topology};
use crate::error::Result;
use crate::extremal::max_spectral;
use crate::oracle::{component_milnor, naive_defect_of, random_component, random_polygon, random_splice, Bounds};
use crate::par::{map_collect, Exec};
use crate::polygon::Polygon;
use crate::rational::{moment, Rat};
use crate::spectral::{spectral_pairs_signed, spectral_pairs_with, spectrum, splice_correction};
use crate::variance::{component_defect, global_defect_of, nd_defect};

/// The identity families checked by [`verify`], in report order.
pub const FAMILIES: [&str; 9] = [
    "polygon_oracle",
    "nondegenerate_defect",
    "splice_additivity",
    "psi_factorization",
    "max_spectral",
    "global_defect",
    "structural_invariants",
    "component_identities",
    "hertling_bound",
];

/// Parameters of a randomized verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub count: usize,
    pub depth: u32,
    pub bounds: Bounds,
    /// Degenerate instances with a larger Milnor number are skipped.
    pub max_milnor: i64,
    /// Counterexamples dumped per family.
    pub max_dumps: usize,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig { seed: 0, count: 200, depth: 2, bounds: Bounds::default(), max_milnor: 50_000, max_dumps: 3 }
    }
}

/// A failed check with the instance that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagram: Option<Diagram>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub families: Vec<FamilyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyReport::passed)
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String, Option<Diagram>),
}

fn outcome(ok: Result<bool>, detail: impl FnOnce() -> String, d: Option<&Diagram>) -> Outcome {
    match ok {
        Ok(true) => Outcome::Pass,
        Ok(false) => Outcome::Fail(detail(), d.cloned()),
        Err(e) => Outcome::Fail(e.to_string(), d.cloned()),
    }
}

fn check_polygon(p: &Polygon) -> [Outcome; 2] {
    let d = p.to_diagram();
    let lattice = p.lattice_spectrum();
    let oracle = outcome(
        spectrum(&d).map(|sp| {
            sp == lattice && moment(&lattice, 0) == Rat::from_int(p.milnor()) && p.milnor() == p.kouchnirenko()
        }),
        || format!("polygon {:?}: engine and lattice spectra differ", p.faces()),
        Some(&d),
    );
    if lattice.is_empty() {
        return [oracle, Outcome::Skip];
    }
    let defect = outcome(
        nd_defect(p).and_then(|r| {
            let direct = naive_defect_of(&lattice)?;
            Ok(r.defect == direct && r.edge_sum() == direct && r.edge_terms.iter().all(|t| !t.e.is_negative()))
        }),
        || format!("polygon {:?}: edge expansion differs from the direct defect", p.faces()),
        Some(&d),
    );
    [oracle, defect]
}

fn check_splice(seed: u64, cfg: &VerifyConfig) -> Outcome {
    if cfg.depth == 0 && cfg.bounds.max_faces < 2 {
        return Outcome::Skip;
    }
    let inst = random_splice(seed, cfg.depth, cfg.bounds);
    let ok = (|| {
        let m1 = inst.first.arrows[inst.first_arrow].mult;
        let m2 = inst.second.arrows[inst.second_arrow].mult;
        let spliced = splice(&inst.first, inst.first_arrow, &inst.second, inst.second_arrow)?;
        let mut expected = spectral_pairs_signed(&inst.first, Exec::Sequential)?;
        expected.add_scaled(&spectral_pairs_signed(&inst.second, Exec::Sequential)?, 1);
        expected.add_scaled(&splice_correction(m1, m2), 1);
        Ok(spectral_pairs_with(&spliced, Exec::Sequential)? == expected)
    })();
    outcome(ok, || format!("splice along edge {}", inst.edge), Some(&inst.whole))
}

/// Outcomes for the families from `psi_factorization` through `hertling_bound`.
fn check_degenerate(seed: u64, cfg: &VerifyConfig) -> Vec<Outcome> {
    let c = random_component(seed, cfg.depth, cfg.bounds);
    let skip = || (0..6).map(|_| Outcome::Skip).collect();
    match component_milnor(&c) {
        Ok(mu) if mu > 0 && mu <= cfg.max_milnor => {}
        _ => return skip(),
    }
    let d = c.build();
    let pairs = match spectral_pairs_with(&d, Exec::Sequential) {
        Ok(p) => p,
        Err(e) => return (0..6).map(|_| Outcome::Fail(e.to_string(), Some(d.clone()))).collect(),
    };
    let sp = pairs.project();
    let mut out = Vec::new();

    out.push(outcome(
        c.normalize_h1()
            .and_then(|n| decompose_component(&n))
            .and_then(|comb| sppa_with(&comb, Exec::Sequential))
            .map(|b| b == pairs),
        || "decomposition and diagram spectral pairs differ".into(),
        Some(&d),
    ));

    let (max, min) = (sp.max().cloned(), sp.min().cloned());
    out.push(outcome(
        max_spectral(&d).map(|m| {
            Some(&m.alpha) == max.as_ref()
                && sp.get(&m.alpha) == 1
                && min.as_ref() == Some(&-&m.alpha)
                && sp.get(&-&m.alpha) == 1
        }),
        || format!("maximal spectral value differs from the spectrum maximum {max:?}"),
        Some(&d),
    ));

    let defect = c.normalize_max().and_then(|(n, _)| global_defect_of(&n));
    out.push(outcome(
        defect.clone().and_then(|r| {
            let naive = naive_defect_of(&sp)?;
            let all_zero = r.edge_terms.iter().all(|t| t.e.is_zero());
            Ok(r.defect == naive
                && r.edge_sum() == naive
                && r.edge_terms.iter().all(|t| !t.e.is_negative() && t.delta > 0)
                && !r.defect.is_positive()
                && r.defect.is_zero() == all_zero)
        }),
        || format!("global defect {:?} differs from the spectrum", defect.as_ref().map(|r| r.defect.to_string())),
        Some(&d),
    ));

    let one = Rat::one();
    out.push(outcome(
        Topology::new(&d).and_then(|t| {
            let symmetric = sp.iter().all(|(a, m)| sp.get(&-a) == m && *a > -&one && *a < one);
            let nonnegative = pairs.iter().all(|(_, m)| m > 0);
            let mut invariant = true;
            for v in t.rupture_vertices() {
                invariant &= spectrum(&d.with_root(t.id(v)))? == sp;
            }
            Ok(symmetric && nonnegative && invariant)
        }),
        || "spectrum is asymmetric, out of range, negative or root dependent".into(),
        Some(&d),
    ));

    out.push(outcome(
        max_spectral(&d).and_then(|m| {
            let mut ok = true;
            for w in c.components() {
                let cd = component_defect(&w, &m.alpha)?;
                let mu_plus = Polygon::new(psi_plus(&w))?.milnor();
                let mu_minus = Polygon::new(psi_minus(&w))?.milnor();
                ok &= Rat::from_int(mu_plus - mu_minus) == cd.mu_expansion;
                ok &= &cd.alpha_plus - &cd.alpha_minus == &cd.c0_plus * Rat::from_int(w.ell_plus - w.ell_minus);
            }
            Ok(ok)
        }),
        || "component μ or α expansion differs".into(),
        Some(&d),
    ));

    out.push(outcome(
        crate::variance::variance(&sp).map(|v| match (&max, &min) {
            (Some(hi), Some(lo)) => v <= (hi - lo) / Rat::from_int(12),
            _ => false,
        }),
        || "variance exceeds (α_μ − α_1)/12".into(),
        Some(&d),
    ));
    out
}

fn check_instance(i: usize, cfg: &VerifyConfig) -> Vec<Outcome> {
    let seed = cfg.seed.wrapping_add(i as u64);
    let p = random_polygon(seed, cfg.bounds.max_faces, cfg.bounds.max_entry);
    let mut out: Vec<Outcome> = check_polygon(&p).into();
    out.push(check_splice(seed, cfg));
    out.extend(check_degenerate(seed, cfg));
    out
}

/// Runs every identity family on `count` seeded instances.
pub fn verify(cfg: VerifyConfig, exec: Exec) -> VerifyReport {
    let results = map_collect((0..cfg.count).collect(), exec, |i| (i, check_instance(i, &cfg)));
    let mut families: Vec<FamilyReport> = FAMILIES
        .iter()
        .map(|n| FamilyReport { name: n.to_string(), checked: 0, skipped: 0, failed: 0, counterexamples: Vec::new() })
        .collect();
    for (i, outcomes) in results {
        for (f, o) in families.iter_mut().zip(outcomes) {
            match o {
                Outcome::Pass => f.checked += 1,
                Outcome::Skip => f.skipped += 1,
                Outcome::Fail(detail, diagram) => {
                    f.checked += 1;
                    f.failed += 1;
                    if f.counterexamples.len() < cfg.max_dumps {
                        f.counterexamples.push(Counterexample { seed: cfg.seed.wrapping_add(i as u64), detail, diagram });
                    }
                }
            }
        }
    }
    VerifyReport { config: cfg, families }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_reports_every_family() {
        let cfg = VerifyConfig { count: 4, depth: 1, ..VerifyConfig::default() };
        let r = verify(cfg, Exec::Sequential);
        assert_eq!(r.families.len(), FAMILIES.len());
        for f in &r.families {
            assert_eq!(f.checked + f.skipped, 4, "{}", f.name);
        }
        assert!(r.families[0].passed() && r.families[2].passed());
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = VerifyConfig { seed: 9, count: 3, depth: 1, ..VerifyConfig::default() };
        assert_eq!(verify(cfg, Exec::Sequential), verify(cfg, Exec::Parallel));
    }
}
