//! Exact spectra, spectral pairs, maximal spectral values and variance defects of
//! plane curve singularities given by Eisenbud–Neumann splice diagrams or Newton polygons.

pub mod decomposition;
pub mod diagram;
pub mod error;
pub mod extremal;
pub mod normal_form;
pub mod oracle;
pub mod par;
pub mod polygon;
pub mod rational;
pub mod spectral;
pub mod variance;
pub mod verify;

pub use diagram::{cut, parse_chain, splice, validate, Arrow, Diagram, Edge, Topology, Validation, Violation};
pub use error::{Error, Result};
pub use par::Exec;
pub use polygon::{BrickSpec, Face, Polygon, PolygonSpec};
pub use rational::{frac, moment, project, PairBag, Rat, SpecBag, SpectralPair};
pub use spectral::{spectral_pairs, spectral_pairs_with, spectrum, splice_correction};
pub use decomposition::{decompose, sppa, PolygonCombination};
pub use extremal::{max_spectral, virtual_value, walk_direction, MaxSpectral};
pub use normal_form::{normalize_h1, Component, Node};
pub use oracle::{brieskorn_spectrum, naive_defect, random_diagram, random_polygon, Bounds};
pub use variance::{global_defect, hertling_verdict, nd_defect, variance, DefectReport, Verdict};
pub use verify::{verify, VerifyConfig, VerifyReport};
