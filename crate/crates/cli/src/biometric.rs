use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::path::{Path, PathBuf};

use hybridauth_core::biometric::{
    build_template, extract_features, get_z_list, select_features, FeatureId, FeatureSet, Template,
    UserAttackerPair,
};
use serde_json::json;

use crate::args::{BiometricCommand, CorpusArgs};
use crate::io::{jsonl_files, read_to_string, read_trace, write_json};
use crate::{CliError, Report};

fn features_of(path: &Path) -> Result<FeatureSet, CliError> {
    extract_features(&read_trace(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn common_features<'a>(sets: impl IntoIterator<Item = &'a FeatureSet>) -> Vec<FeatureId> {
    let mut iter = sets.into_iter();
    let Some(first) = iter.next() else { return Vec::new() };
    let mut common: BTreeSet<FeatureId> = first.available().collect();
    for s in iter {
        common.retain(|f| s.has(*f));
    }
    common.into_iter().collect()
}

fn or_common(chosen: &[FeatureId], fallback: Vec<FeatureId>) -> Vec<FeatureId> {
    if chosen.is_empty() {
        fallback
    } else {
        chosen.to_vec()
    }
}

/// Rendering files grouped by `(user, symbol)` from their headers, each group
/// in path order.
pub struct Corpus {
    pub groups: BTreeMap<(String, String), Vec<(PathBuf, FeatureSet)>>,
}

impl Corpus {
    pub fn load(dir: &Path) -> Result<Self, CliError> {
        let mut groups: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for path in jsonl_files(dir)? {
            let trace = read_trace(&path)?;
            let header = trace
                .header
                .clone()
                .ok_or_else(|| CliError::Data(format!("{}: rendering has no header line", path.display())))?;
            let features = extract_features(&trace).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            groups.entry((header.user, header.symbol)).or_default().push((path, features));
        }
        if groups.is_empty() {
            return Err(CliError::Data(format!("{}: no renderings found", dir.display())));
        }
        Ok(Self { groups })
    }

    /// Registration = first `registration` renderings of the user, user
    /// tests = the rest, attacker tests = every other user's renderings of
    /// the symbol.
    pub fn pair(&self, user: &str, symbol: &str, registration: usize) -> Result<UserAttackerPair, CliError> {
        let own = self
            .groups
            .get(&(user.to_owned(), symbol.to_owned()))
            .ok_or_else(|| CliError::Data(format!("no renderings of {symbol:?} by {user:?}")))?;
        if own.len() <= registration {
            return Err(CliError::Data(format!(
                "{user:?}/{symbol:?}: {} renderings, need more than {registration}",
                own.len()
            )));
        }
        let attacker_tests: Vec<FeatureSet> = self
            .groups
            .iter()
            .filter(|((u, s), _)| u != user && s == symbol)
            .flat_map(|(_, v)| v.iter().map(|(_, f)| f.clone()))
            .collect();
        Ok(UserAttackerPair {
            registration: own[..registration].iter().map(|(_, f)| f.clone()).collect(),
            user_tests: own[registration..].iter().map(|(_, f)| f.clone()).collect(),
            attacker_tests,
        })
    }

    fn all_features(&self) -> Vec<FeatureId> {
        common_features(self.groups.values().flatten().map(|(_, f)| f))
    }
}

fn train(
    traces: &[PathBuf],
    purpose: crate::args::PurposeArg,
    features: &[FeatureId],
    radius: f64,
    z: f64,
    fit_z: bool,
    out: Option<&Path>,
) -> Result<Report, CliError> {
    let samples = traces.iter().map(|p| features_of(p)).collect::<Result<Vec<_>, _>>()?;
    let features = or_common(features, common_features(&samples));
    let mut template = build_template(&samples, &features, purpose.into(), radius).map_err(CliError::data)?.with_z(z);
    if fit_z {
        template.z = template.z.max(template.fitted_z(&samples).map_err(CliError::data)?);
    }
    if let Some(dir) = out {
        write_json(&dir.join("template.json"), &template)?;
    }
    let text = format!(
        "template over {} renderings, {} features: mu = {:.4}, sigma = {:.4}, z = {}, threshold = {:.4}\n",
        samples.len(),
        template.features.len(),
        template.mu,
        template.sigma,
        template.z,
        template.threshold()
    );
    Ok(Report { json: serde_json::to_value(&template).expect("templates serialize"), text })
}

fn verify(template_path: &Path, traces: &[PathBuf]) -> Result<Report, CliError> {
    let template: Template = serde_json::from_str(&read_to_string(template_path)?)
        .map_err(|e| CliError::Data(format!("{}: {e}", template_path.display())))?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for path in traces {
        let distance = template.distance(&features_of(path)?).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let accept = distance <= template.threshold();
        writeln!(text, "{}  {:.4}  {}", path.display(), distance, if accept { "accept" } else { "reject" }).unwrap();
        rows.push(json!({ "trace": path, "distance": distance, "accept": accept }));
    }
    Ok(Report { json: json!({ "threshold": template.threshold(), "results": rows }), text })
}

fn zlist(corpus: &CorpusArgs, user: &str, symbol: &str, features: &[FeatureId], out: Option<&Path>) -> Result<Report, CliError> {
    let c = Corpus::load(&corpus.corpus)?;
    let pair = c.pair(user, symbol, corpus.registration)?;
    if pair.attacker_tests.is_empty() {
        return Err(CliError::Data(format!("no other user rendered {symbol:?}")));
    }
    let features = or_common(features, c.all_features());
    let list = get_z_list(&features, &pair.registration, &pair.user_tests, &pair.attacker_tests, corpus.radius)
        .map_err(CliError::data)?;
    if let Some(dir) = out {
        write_json(&dir.join("zlist.json"), &list)?;
    }
    let mut text = String::from("     z     tpr     fpr\n");
    for e in &list {
        writeln!(text, "{:>6.3}  {:>6.3}  {:>6.3}", e.z, e.tpr, e.fpr).unwrap();
    }
    Ok(Report { json: json!({ "user": user, "symbol": symbol, "features": features, "z_list": list }), text })
}

fn select(corpus: &CorpusArgs, features: &[FeatureId], out: Option<&Path>) -> Result<Report, CliError> {
    let c = Corpus::load(&corpus.corpus)?;
    let mut pairs = Vec::new();
    for ((user, symbol), own) in &c.groups {
        if own.len() <= corpus.registration {
            continue;
        }
        let pair = c.pair(user, symbol, corpus.registration)?;
        if !pair.attacker_tests.is_empty() {
            pairs.push(pair);
        }
    }
    if pairs.is_empty() {
        return Err(CliError::Data("corpus has no user/attacker pair with test renderings".into()));
    }
    let features = or_common(features, c.all_features());
    let selection = select_features(&features, &pairs, corpus.radius).map_err(CliError::data)?;
    if let Some(dir) = out {
        write_json(&dir.join("selection.json"), &selection)?;
    }
    let names: Vec<&str> = selection.features.iter().map(|f| f.name()).collect();
    let text = format!(
        "selected {} of {} features over {} pairs: {}\nz = {}, tpr sum = {:.3}, fpr sum = {:.3}\n",
        names.len(),
        features.len(),
        pairs.len(),
        names.join(","),
        selection.z,
        selection.tpr_sum,
        selection.fpr_sum
    );
    Ok(Report { json: serde_json::to_value(&selection).expect("selections serialize"), text })
}

pub fn cmd_biometric(cmd: &BiometricCommand, out: Option<&Path>) -> Result<Report, CliError> {
    match cmd {
        BiometricCommand::Train { traces, purpose, features, radius, z, fit_z } => {
            train(traces, *purpose, features, *radius, *z, *fit_z, out)
        }
        BiometricCommand::Verify { template, traces } => verify(template, traces),
        BiometricCommand::Zlist { corpus, user, symbol, features } => zlist(corpus, user, symbol, features, out),
        BiometricCommand::Select { corpus, features } => select(corpus, features, out),
    }
}
