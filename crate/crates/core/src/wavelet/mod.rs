//! Daubechies filters, discrete wavelet packet transform, best-basis
//! selection and wavelet-domain GARMA estimation.

pub mod filters;
pub mod packet;
pub mod whittle;

pub use filters::{daubechies_filters, mirror, WaveletFilterPair};
pub use packet::{
    best_basis_with_min_depth,
    basis_report, best_basis, dwpt, frequency_interval, idwpt, idwpt_from_nodes, BasisSelection,
    PacketTree, WaveletBasis,
};
pub use whittle::{
    detect_gegenbauer_frequencies, node_band_variance, wavelet_whittle_fit, DetectedPeak,
    WhittleConfig, WhittleFitReport,
};
