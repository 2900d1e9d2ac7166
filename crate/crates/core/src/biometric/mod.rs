//! Touch-dynamics verification: feature extraction, banded DTW, medoid
//! templates with `μ + zσ` thresholds, the two-step symbol/user decision and
//! greedy feature selection.

mod classify;
mod dtw;
mod features;
mod selection;
mod symbols;
mod template;
mod trace;

pub use classify::{
    classify, BiometricConfig, BiometricProfile, ClassifyError, Decision, Stage, SymbolTemplates,
};
pub use dtw::{dtw, dtw_distance, DtwResult, DEFAULT_RADIUS};
pub use features::{
    derivatives, extract_features, extract_raw_features, zscore, FeatureError, FeatureId, FeatureSet,
};
pub use selection::{
    get_z_list, select_features, z_grid, PairDistances, Selection, SelectionError, SelectionStep,
    UserAttackerPair, ZListEntry,
};
pub use symbols::{SymbolError, SymbolSet};
pub use template::{build_template, Purpose, Template, TemplateError};
pub use trace::{MotionBlock, TouchAction, TouchEvent, Trace, TraceError, TraceHeader};

/// Spacing of the `z` grid searched during selection.
pub const Z_STEP: f64 = 0.125;
/// Largest `z` searched.
pub const Z_MAX: f64 = 10.0;

/// Sum of per-feature DTW distances between a template and a sample.
pub fn multi_dtw(template: &Template, sample: &FeatureSet) -> Result<f64, FeatureError> {
    template.distance(sample)
}
