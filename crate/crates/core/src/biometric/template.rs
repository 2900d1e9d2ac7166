use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dtw::dtw;
use super::features::{FeatureError, FeatureId, FeatureSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Purpose {
    /// Decides which symbol was rendered; coordinates only.
    Sym,
    /// Decides whether the rendering comes from the enrolled user.
    User,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemplateError {
    #[error("a template needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("empty feature subset")]
    NoFeatures,
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Per-feature medoid series plus the spread of registration distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub purpose: Purpose,
    pub features: Vec<FeatureId>,
    pub series: BTreeMap<FeatureId, Vec<f64>>,
    pub mu: f64,
    pub sigma: f64,
    pub z: f64,
    pub radius: f64,
}

impl Template {
    pub fn threshold(&self) -> f64 {
        self.mu + self.z * self.sigma
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    /// Sum of per-feature DTW distances to `sample`.
    pub fn distance(&self, sample: &FeatureSet) -> Result<f64, FeatureError> {
        let mut total = 0.0;
        for &f in &self.features {
            total += dtw(&self.series[&f], sample.get(f)?, self.radius);
        }
        Ok(total)
    }

    pub fn accepts(&self, sample: &FeatureSet) -> Result<bool, FeatureError> {
        Ok(self.distance(sample)? <= self.threshold())
    }

    /// Smallest `z` on the selection grid under which every sample is
    /// accepted: the largest standardized residual, rounded up to the grid.
    pub fn fitted_z(&self, samples: &[FeatureSet]) -> Result<f64, FeatureError> {
        let mut worst: f64 = 0.0;
        for s in samples {
            let d = self.distance(s)?;
            if d > self.mu && self.sigma > 0.0 {
                worst = worst.max((d - self.mu) / self.sigma);
            }
        }
        // one extra ulp-scale margin so the equality case survives rounding
        Ok(((worst + 1e-9) / super::Z_STEP).ceil() * super::Z_STEP)
    }
}

/// Index of the series with the least summed DTW distance to the others;
/// ties go to the lowest index.
pub(crate) fn medoid_index(series: &[&[f64]], radius: f64) -> usize {
    let t = series.len();
    let mut sums = vec![0.0; t];
    for i in 0..t {
        for j in i + 1..t {
            let d = dtw(series[i], series[j], radius);
            sums[i] += d;
            sums[j] += d;
        }
    }
    (0..t).min_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(a.cmp(&b))).expect("non-empty")
}

pub(crate) fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mu = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|d| (d - mu).powi(2)).sum::<f64>() / n;
    (mu, var.sqrt())
}

/// Builds a template from registration samples. Each feature's series is the
/// medoid of that feature across samples, so different features may come
/// from different samples. `Purpose::Sym` always uses `x` and `y`.
pub fn build_template(
    samples: &[FeatureSet],
    features: &[FeatureId],
    purpose: Purpose,
    radius: f64,
) -> Result<Template, TemplateError> {
    if samples.len() < 2 {
        return Err(TemplateError::TooFewSamples(samples.len()));
    }
    let features: Vec<FeatureId> = match purpose {
        Purpose::Sym => FeatureId::COORDINATES.to_vec(),
        Purpose::User => features.to_vec(),
    };
    if features.is_empty() {
        return Err(TemplateError::NoFeatures);
    }
    let mut series = BTreeMap::new();
    for &f in &features {
        let column = samples.iter().map(|s| s.get(f)).collect::<Result<Vec<_>, _>>()?;
        let best = medoid_index(&column, radius);
        series.insert(f, column[best].to_vec());
    }
    let mut template = Template { purpose, features, series, mu: 0.0, sigma: 0.0, z: 0.0, radius };
    let distances = samples.iter().map(|s| template.distance(s)).collect::<Result<Vec<_>, _>>()?;
    (template.mu, template.sigma) = mean_sd(&distances);
    Ok(template)
}
