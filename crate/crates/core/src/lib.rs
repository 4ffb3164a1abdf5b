//! Cluster catch digraphs (CCDs) and the CCD-based outlier detectors
//! RU-MCCD, SU-MCCD, UN-MCCD and SUN-MCCD.
//!
//! A CCD gives every point a covering ball whose radius is picked by a
//! spatial-randomness criterion; arcs record which balls catch which points.
//! Dominating balls of the digraph become cluster cores, and per-cluster
//! mutual catch graphs separate regular points from outliers.
//!
//! ```
//! use ccd_core::{detect, synth, CsrContext, DetectConfig, Detector};
//!
//! let spec = synth::SceneSpec::general(synth::ClusterKind::Uniform, 2, 60, 7).unwrap();
//! let data = synth::gen_scene(&spec).unwrap();
//! let cfg = DetectConfig { contamination: Some(0.05), nnd_sims: 200, ..Default::default() };
//! let report = detect::detect(Detector::Sun, &data, &cfg, &CsrContext::default()).unwrap();
//! assert_eq!(report.outlier.len(), 60);
//! ```
//!
//! Geometry is generic over [`Scalar`] (`f32` or `f64`); simulated
//! reference distributions are always kept in `f64`.

pub mod bench;
pub mod ccd;
pub mod components;
pub mod csr;
pub mod dataset;
pub mod detect;
pub mod digraph;
pub mod error;
pub mod geometry;
pub mod io;
pub mod mcg;
pub mod mds;
pub mod metrics;
pub mod normalize;
pub mod rng;
pub mod scalar;
pub mod synth;

pub use ccd::{ClusterModel, Variant};
pub use csr::CsrContext;
pub use dataset::Dataset;
pub use detect::{DetectConfig, DetectionReport, Detector};
pub use digraph::{CatchDigraph, CoveringBall, Digraph};
pub use error::{Error, Result};
pub use geometry::{distance_matrix, DistanceMatrix};
pub use scalar::Scalar;

pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type CatchDigraph64 = CatchDigraph<f64>;
pub type CatchDigraph32 = CatchDigraph<f32>;
pub type DetectionReport64 = DetectionReport<f64>;
pub type DetectionReport32 = DetectionReport<f32>;
