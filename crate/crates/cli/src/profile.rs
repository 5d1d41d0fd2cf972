//! Stored equilibrium profiles: one row per creator with the game kind, its
//! cost, action (`human` or `genai`), per-topic efforts and utility. GenAI
//! rows leave the effort cells empty.

use std::io::{Read, Write};

use tullock_genai::experiments::fmt_float;
use tullock_genai::game::{Action, InclusiveProfile};
use tullock_genai::solver::{EquilibriumReport, SolvedProfile};

use crate::error::CliError;

pub fn write_profile<W: Write>(out: W, report: &EquilibriumReport, costs: &[f64]) -> Result<(), CliError> {
    let k = report.topic_totals.len();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["game".to_string(), "creator".into(), "cost".into(), "action".into()];
    header.extend((0..k).map(|t| format!("x{t}")));
    header.push("utility".into());
    w.write_record(&header)?;

    let (kind, actions): (&str, Vec<Action>) = match &report.profile {
        SolvedProfile::Exclusive(p) => ("exclusive", p.rows().map(|r| Action::Human(r.to_vec())).collect()),
        SolvedProfile::Inclusive(p) => ("inclusive", p.actions().to_vec()),
    };
    for (i, a) in actions.iter().enumerate() {
        let mut rec = vec![kind.to_string(), i.to_string(), fmt_float(costs[i])];
        match a {
            Action::Human(x) => {
                rec.push("human".into());
                rec.extend(x.iter().map(|&v| fmt_float(v)));
            }
            Action::GenAi => {
                rec.push("genai".into());
                rec.extend(std::iter::repeat(String::new()).take(k));
            }
        }
        rec.push(fmt_float(report.utilities[i]));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// A profile read back from disk.
pub struct StoredProfile {
    pub inclusive: bool,
    pub profile: InclusiveProfile,
    pub costs: Vec<f64>,
}

pub fn read_profile<R: Read>(input: R) -> Result<StoredProfile, CliError> {
    let bad = |msg: String| CliError::Config(format!("profile: {msg}"));
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    let k = header.iter().filter(|h| h.starts_with('x')).count();
    if header.len() != k + 5 || &header[0] != "game" || &header[3] != "action" {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut kinds = Vec::new();
    let mut actions = Vec::new();
    let mut costs = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("row {line}: {e}")));
        kinds.push(rec[0].to_string());
        costs.push(num(&rec[2])?);
        actions.push(match &rec[3] {
            "human" => Action::Human((4..4 + k).map(|c| num(&rec[c])).collect::<Result<_, _>>()?),
            "genai" => Action::GenAi,
            other => return Err(bad(format!("row {line}: unknown action {other:?}"))),
        });
    }
    let inclusive = match kinds.first().map(String::as_str) {
        Some("inclusive") => true,
        Some("exclusive") => false,
        other => return Err(bad(format!("unknown game kind {other:?}"))),
    };
    if kinds.iter().any(|g| *g != kinds[0]) {
        return Err(bad("rows disagree on the game kind".into()));
    }
    if !inclusive && actions.iter().any(Action::is_genai) {
        return Err(bad("GenAI rows in an exclusive profile".into()));
    }
    Ok(StoredProfile {
        inclusive,
        profile: InclusiveProfile::new(actions),
        costs,
    })
}
