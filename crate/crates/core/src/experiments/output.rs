//! CSV persistence. Floats are written with 17 significant digits so that
//! every value round-trips exactly; line endings are LF.

use std::io::Write;

use crate::error::Result;

use super::metrics::mean_std_err;
use super::sweep::{SweepRow, SweepSpec};

/// `{:.16e}`: one leading digit plus 16 decimals.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Header of the main results file for `spec`.
pub fn row_header(spec: &SweepSpec) -> Vec<String> {
    let mut h: Vec<String> = ["instance_id", "seed"].map(String::from).to_vec();
    h.extend(spec.param_names().into_iter().map(String::from));
    h.extend(
        ["s_star", "welfare", "genai_fraction", "iterations", "residual", "verified"]
            .map(String::from),
    );
    if spec.topic_count() > 1 {
        for k in 0..spec.topic_count() {
            h.extend([format!("topic{k}_s"), format!("topic{k}_occ"), format!("topic{k}_gain")]);
        }
    }
    h
}

/// One line per row. Undefined occupation ratios are written as `NaN`.
pub fn write_rows<W: Write>(out: W, spec: &SweepSpec, rows: &[SweepRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(row_header(spec))?;
    let multi = spec.topic_count() > 1;
    for r in rows {
        let mut rec = vec![r.instance_id.to_string(), r.seed.to_string()];
        rec.extend(r.params.iter().map(|&v| fmt_float(v)));
        rec.extend([
            fmt_float(r.s_star),
            fmt_float(r.welfare),
            fmt_float(r.genai_fraction),
            r.iterations.to_string(),
            fmt_float(r.residual),
            r.verified.to_string(),
        ]);
        if multi {
            for t in &r.topics {
                rec.extend([
                    fmt_float(t.s),
                    fmt_float(t.occupation.unwrap_or(f64::NAN)),
                    fmt_float(t.gain),
                ]);
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Human against GenAI totals per row, for the inclusive kinds.
pub fn write_welfare_split<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = writer(out);
    w.write_record([
        "instance_id",
        "human_count",
        "human_welfare",
        "genai_welfare",
        "human_content",
        "genai_content",
    ])?;
    for r in rows {
        w.write_record([
            r.instance_id.to_string(),
            r.human_count.to_string(),
            fmt_float(r.human_welfare),
            fmt_float(r.genai_welfare),
            fmt_float(r.s_star),
            fmt_float(r.genai_content),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Adoption frequency per cost group (group 0 = cheapest creators).
pub fn write_groups<W: Write>(out: W, frequencies: &[f64]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["group", "adoption_frequency"])?;
    for (g, f) in frequencies.iter().enumerate() {
        w.write_record([g.to_string(), fmt_float(*f)])?;
    }
    w.flush()?;
    Ok(())
}

type Metric = (&'static str, fn(&SweepRow) -> f64);

const SUMMARY_METRICS: [Metric; 6] = [
    ("s_star", |r| r.s_star),
    ("welfare", |r| r.welfare),
    ("genai_fraction", |r| r.genai_fraction),
    ("human_welfare", |r| r.human_welfare),
    ("genai_welfare", |r| r.genai_welfare),
    ("genai_content", |r| r.genai_content),
];

/// Per grid point: run counts and mean, standard deviation and standard
/// error of each metric over seeds (plus per-topic means for multi-topic
/// sweeps).
pub fn write_summary<W: Write>(out: W, spec: &SweepSpec, rows: &[SweepRow]) -> Result<()> {
    let mut w = writer(out);
    let k = spec.topic_count();
    let mut header: Vec<String> = spec.param_names().into_iter().map(String::from).collect();
    header.extend(["runs", "verified_runs"].map(String::from));
    for (name, _) in SUMMARY_METRICS {
        header.extend([format!("{name}_mean"), format!("{name}_std"), format!("{name}_stderr")]);
    }
    if k > 1 {
        for t in 0..k {
            header.extend([format!("topic{t}_occ_mean"), format!("topic{t}_gain_mean")]);
        }
    }
    w.write_record(&header)?;

    for group in rows.chunk_by(|a, b| a.params == b.params) {
        let mut rec: Vec<String> = group[0].params.iter().map(|&v| fmt_float(v)).collect();
        rec.push(group.len().to_string());
        rec.push(group.iter().filter(|r| r.verified).count().to_string());
        for (_, get) in SUMMARY_METRICS {
            let values: Vec<f64> = group.iter().map(get).collect();
            let (mean, std, se) = mean_std_err(&values);
            rec.extend([fmt_float(mean), fmt_float(std), fmt_float(se)]);
        }
        if k > 1 {
            for t in 0..k {
                let occ: Vec<f64> = group
                    .iter()
                    .map(|r| r.topics[t].occupation.unwrap_or(f64::NAN))
                    .collect();
                let gain: Vec<f64> = group.iter().map(|r| r.topics[t].gain).collect();
                rec.push(fmt_float(mean_std_err(&occ).0));
                rec.push(fmt_float(mean_std_err(&gain).0));
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        let s = fmt_float(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        let third = 1.0 / 3.0;
        assert_eq!(fmt_float(third).parse::<f64>().unwrap(), third);
    }
}
