use std::fmt::Write;

use hybridauth_core::attack::{
    brute_force_recover, frequency_analysis, ge_recover, ge_slack_recover, mitm_recover, AttackError, AttackReport,
    FrequencyMode, FrequencyOptions, Work,
};
use hybridauth_core::cognitive::{ch_attack_estimate, complexity_bits};
use hybridauth_core::{SchemeParams, Secret, Transcript};
use serde_json::json;

use crate::args::{AttackArgs, AttackName};
use crate::io::read_transcript;
use crate::params::scheme_params;
use crate::{CliError, Report};

fn attack_label(name: AttackName) -> &'static str {
    match name {
        AttackName::Bruteforce => "bruteforce",
        AttackName::Mitm => "mitm",
        AttackName::Ge => "ge",
        AttackName::GeSlack => "ge-slack",
        AttackName::Freq => "freq",
        AttackName::Ch => "ch",
    }
}

/// Maps attack failures: budget overruns become exit code 4 with the cost
/// estimate, systems that do not pin down a secret become an unrecovered
/// report, bad input becomes a data error.
fn failure(name: &str, params: &SchemeParams, e: AttackError, rows: u64) -> Result<AttackReport, CliError> {
    match e {
        AttackError::BudgetExceeded { required_bits, budget } => Err(CliError::Budget {
            message: e.to_string(),
            estimate: json!({
                "attack": name,
                "required_bits": required_bits,
                "budget": budget,
                "complexity": complexity_bits(params),
            }),
        }),
        AttackError::Underdetermined { .. } | AttackError::Inconsistent => {
            Ok(AttackReport::new(name, None, Work { rows, candidates: 0 }, json!({ "reason": e.to_string() })))
        }
        AttackError::UnsupportedModulus(_) | AttackError::Input(_) => Err(CliError::data(e)),
    }
}

pub fn run_attack(args: &AttackArgs, transcript: Option<&Transcript>) -> Result<AttackReport, CliError> {
    let name = attack_label(args.name);
    if args.name == AttackName::Ch {
        let params = match (transcript, args.params) {
            (Some(t), _) => *t.params(),
            (None, Some(row)) => scheme_params(row)?,
            (None, None) => return Err(CliError::Usage("ch needs --transcript or --params".into())),
        };
        let budget = args.ch_budget.unwrap_or_else(|| complexity_bits(&params).mitm_bits);
        let estimate = ch_attack_estimate(&params, budget);
        return Ok(AttackReport::new(name, None, Work::default(), json!({ "estimate": estimate })));
    }
    let t = transcript.ok_or_else(|| CliError::Usage(format!("{name} needs --transcript")))?;
    let params = t.params();
    let rows = t.len() as u64;
    let result = match args.name {
        AttackName::Bruteforce => brute_force_recover(t, args.budget).map(|s| AttackReport::from_candidates(name, &s, rows)),
        AttackName::Mitm => mitm_recover(t, args.budget).map(|s| AttackReport::from_candidates(name, &s, rows)),
        AttackName::Ge => ge_recover(t, args.budget).map(|o| {
            let stats = json!({ "rank": o.rank, "free": o.free, "equations": o.rows });
            AttackReport::new(name, Some(&o.secret), Work { rows: o.rows as u64, candidates: o.solutions_checked }, stats)
        }),
        AttackName::GeSlack => ge_slack_recover(t, args.budget).map(|o| {
            let stats = json!({ "rank": o.rank, "free": o.free, "equations": o.rows, "slack": o.slack });
            AttackReport::new(name, Some(&o.secret), Work { rows: o.rows as u64, candidates: o.solutions_checked }, stats)
        }),
        AttackName::Freq => Ok(frequency_report(args, t)),
        AttackName::Ch => unreachable!("handled above"),
    };
    result.or_else(|e| failure(name, params, e, rows))
}

/// With RDFA on single objects, the `k` objects with the largest statistics
/// are proposed as the secret when all of them are flagged and they fit the
/// transcript.
fn frequency_report(args: &AttackArgs, t: &Transcript) -> AttackReport {
    let options = FrequencyOptions { alpha: args.alpha, reference: args.reference.into() };
    let report = frequency_analysis(t, args.delta, args.mode.into(), &options);
    let params = t.params();
    let mut ranked: Vec<_> = report.stats.iter().collect();
    ranked.sort_by(|a, b| b.chi_square.total_cmp(&a.chi_square));
    let guess = (args.delta == 1 && report.table.mode == FrequencyMode::Rdfa && ranked.len() >= params.k())
        .then(|| &ranked[..params.k()])
        .filter(|top| top.iter().all(|s| s.flagged))
        .and_then(|top| Secret::new(params, top.iter().map(|s| s.tuple[0])).ok())
        .filter(|s| t.is_consistent(s));
    let top: Vec<_> = ranked.iter().take(params.k().max(10)).map(|s| json!([s.tuple, s.chi_square])).collect();
    let stats = json!({
        "delta": args.delta,
        "mode": report.table.mode,
        "reference": report.reference,
        "alpha": report.alpha,
        "critical_value": report.critical_value,
        "tuples": report.table.counts.len(),
        "flagged": report.flagged().map(|s| &s.tuple).collect::<Vec<_>>(),
        "top": top,
    });
    AttackReport::new("freq", guess.as_ref(), Work { rows: t.len() as u64, candidates: report.table.counts.len() as u64 }, stats)
}

pub fn cmd_attack(args: &AttackArgs, _seed: u64) -> Result<Report, CliError> {
    let transcript = args.transcript.as_deref().map(read_transcript).transpose()?;
    let report = run_attack(args, transcript.as_ref())?;
    let mut text = String::new();
    writeln!(text, "attack: {}", report.attack).unwrap();
    if report.attack == "ch" {
        let e = &report.stats["estimate"];
        writeln!(
            text,
            "xi = {}, time = 2^{:.1}, samples = {}, feasible = {}",
            e["point"]["xi"], e["point"]["time_bits"].as_f64().unwrap_or(f64::NAN), e["required_samples"], e["feasible"]
        )
        .unwrap();
    } else {
        writeln!(text, "recovered: {}", report.recovered).unwrap();
        if let Some(s) = &report.secret {
            writeln!(text, "secret: {s:?}").unwrap();
        }
        writeln!(text, "rows: {}, candidates: {}", report.work.rows, report.work.candidates).unwrap();
        if let Some(reason) = report.stats.get("reason") {
            writeln!(text, "reason: {}", reason.as_str().unwrap_or_default()).unwrap();
        }
    }
    Ok(Report { json: serde_json::to_value(&report).expect("reports serialize"), text })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{ModeArg, ReferenceArg};
    use hybridauth_core::cognitive::{sample_secret, simulate_transcript, EmptyCasePolicy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn args(name: AttackName) -> AttackArgs {
        AttackArgs {
            name,
            transcript: None,
            budget: 1 << 20,
            params: None,
            ch_budget: None,
            delta: 1,
            mode: ModeArg::Rdfa,
            reference: ReferenceArg::Marginal,
            alpha: 0.01,
        }
    }

    fn planted(params: SchemeParams, m: usize, policy: EmptyCasePolicy, seed: u64) -> (Secret, Transcript) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let secret = sample_secret(&params, &mut rng);
        let t = simulate_transcript(&params, &secret, m, policy, &mut rng).transcript;
        (secret, t)
    }

    #[test]
    fn bruteforce_lists_candidates() {
        let (secret, t) = planted(SchemeParams::cognitive(3, 2, 3, 6).unwrap(), 4, EmptyCasePolicy::Random, 1);
        let r = run_attack(&args(AttackName::Bruteforce), Some(&t)).unwrap();
        let list = r.stats["candidates"].as_array().unwrap();
        assert!(list.iter().any(|c| c.as_array().unwrap().len() == 2 && *c == json!(secret.objects())));
        assert_eq!(r.work.candidates, 15);
    }

    #[test]
    fn ge_recovers_and_reports_shortfalls() {
        let params = SchemeParams::cognitive(5, 4, 8, 20).unwrap();
        let (secret, t) = planted(params, 150, EmptyCasePolicy::Random, 2);
        let r = run_attack(&args(AttackName::Ge), Some(&t)).unwrap();
        assert!(r.recovered);
        assert_eq!(r.secret.as_deref(), Some(secret.objects()));
        let short = run_attack(&args(AttackName::Ge), Some(&t.prefix(10))).unwrap();
        assert!(!short.recovered);
        assert!(short.stats["reason"].is_string());
    }

    #[test]
    fn budget_overrun_exits_with_estimate() {
        let (_, t) = planted(SchemeParams::cognitive(5, 14, 30, 180).unwrap(), 30, EmptyCasePolicy::Random, 3);
        let err = run_attack(&args(AttackName::Bruteforce), Some(&t)).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_json()["estimate"]["complexity"]["bf_bits"].as_f64().unwrap() > 60.0);
    }

    #[test]
    fn ch_is_estimate_only() {
        let mut a = args(AttackName::Ch);
        a.params = Some(crate::args::Row { d: 5, k: 14, l: 30, n: 180 });
        a.ch_budget = Some(40.0);
        let r = run_attack(&a, None).unwrap();
        assert!(!r.recovered);
        assert_eq!(r.work, Work::default());
        assert_eq!(r.stats["estimate"]["point"]["xi"], 6);
        assert_eq!(run_attack(&args(AttackName::Ch), None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn frequency_breaks_fixed_empty_case() {
        let params = SchemeParams::cognitive(5, 4, 6, 20).unwrap();
        let (secret, t) = planted(params, 20_000, EmptyCasePolicy::Fixed(0), 4);
        let r = run_attack(&args(AttackName::Freq), Some(&t)).unwrap();
        assert!(r.recovered, "{}", r.stats);
        assert_eq!(r.secret.as_deref(), Some(secret.objects()));
    }
}
