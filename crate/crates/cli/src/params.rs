use std::fmt::Write;

use hybridauth_core::cognitive::{security_table, AnalysisRow, TableRow};
use hybridauth_core::SchemeParams;
use serde_json::json;

use crate::args::{ParamsArgs, Row, TABLE_ROWS};
use crate::{CliError, Report};

/// CH time budgets used with the reference rows.
pub const TABLE_CH_BUDGETS: [f64; 4] = [11.0, 33.0, 40.0, 51.0];

pub fn scheme_params(row: Row) -> Result<SchemeParams, CliError> {
    SchemeParams::cognitive(row.d, row.k, row.l, row.n).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn analysis_rows(args: &ParamsArgs) -> Result<Vec<AnalysisRow>, CliError> {
    let (rows, budgets): (Vec<Row>, Vec<f64>) = if args.rows.is_empty() {
        let budgets = if args.ch_budgets.is_empty() { TABLE_CH_BUDGETS.to_vec() } else { args.ch_budgets.clone() };
        (TABLE_ROWS.to_vec(), budgets)
    } else {
        (args.rows.clone(), args.ch_budgets.clone())
    };
    if !budgets.is_empty() && budgets.len() != rows.len() {
        return Err(CliError::Usage(format!("{} CH budgets for {} rows", budgets.len(), rows.len())));
    }
    let table_rows = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| Ok(TableRow { params: scheme_params(r)?, ch_budget_bits: budgets.get(i).copied() }))
        .collect::<Result<Vec<_>, CliError>>()?;
    security_table(&table_rows, args.fpr_bar, &args.gammas).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_params(args: &ParamsArgs) -> Result<Report, CliError> {
    let rows = analysis_rows(args)?;
    let mut text = String::new();
    let mut header = format!(
        "{:>16}  {:>6}  {:>4}  {:>7}  {:>7}  {:>13}  {:>5}",
        "(d,k,l,n)", "p_RG", "m_it", "BF", "MitM", "CH time/samp", "GE"
    );
    for g in &args.gammas {
        write!(header, "  {:>9}", format!("γ={g}")).unwrap();
    }
    writeln!(text, "{header}").unwrap();
    for r in &rows {
        let p = r.params;
        let ch = match r.ch.required_samples {
            Some(s) => format!("2^{:.0}/{s}", r.ch.point.time_bits),
            None => format!("2^{:.0}/-", r.ch.point.time_bits),
        };
        let mut line = format!(
            "{:>16}  {:>6.3}  {:>4}  {:>7}  {:>7}  {:>13}  {:>5}",
            format!("({},{},{},{})", p.d(), p.k(), p.l(), p.n()),
            r.p_rg,
            r.m_it,
            format!("2^{:.0}", r.bf_bits),
            format!("2^{:.0}", r.mitm_bits),
            ch,
            r.ge_samples
        );
        for (_, v) in &r.combined {
            write!(line, "  {v:>9.1e}").unwrap();
        }
        writeln!(text, "{line}").unwrap();
    }
    writeln!(text, "combined columns assume FPR = {}", args.fpr_bar).unwrap();
    Ok(Report { json: json!({ "fpr_bar": args.fpr_bar, "rows": rows }), text })
}
