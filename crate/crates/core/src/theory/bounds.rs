//! Bound checks on solved single-topic equilibria.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, TopicParams};
use crate::solver::EquilibriumReport;

/// Margin applied inside strict inequalities so rounding cannot pass a
/// boundary case.
pub const STRICT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
    pub context: String,
    /// Caveats: hypothesis not met, vacuous bound, and so on.
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn new(name: impl Into<String>, value: f64, lower: f64, upper: f64, context: String) -> Self {
        BoundReport {
            name: name.into(),
            value,
            lower,
            upper,
            pass: strictly_between(value, lower, upper),
            context,
            notes: Vec::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {}: {:.6} in ({:.6}, {:.6}) {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.lower,
            self.upper,
            self.context
        )?;
        for n in &self.notes {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

pub(crate) fn strictly_between(value: f64, lower: f64, upper: f64) -> bool {
    value > lower + STRICT_SLACK && value < upper - STRICT_SLACK
}

/// `(sum_i c_i^(-1/(rho-1)))^(rho-1)`, the aggregate creation efficiency.
pub fn hadamard_inverse_norm(costs: &[f64], rho: f64) -> Result<f64> {
    if !(rho > 1.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be > 1, got {rho}")));
    }
    if costs.is_empty() || costs.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::invalid("costs must be non-empty and positive"));
    }
    let p = 1.0 / (rho - 1.0);
    Ok(costs.iter().map(|c| c.powf(-p)).sum::<f64>().powf(rho - 1.0))
}

fn single_topic(game: &Game) -> Result<TopicParams> {
    match game.topics() {
        [t] => Ok(*t),
        ts => Err(Error::invalid(format!(
            "check needs a single topic, got {}",
            ts.len()
        ))),
    }
}

fn describe(game: &Game) -> String {
    let t = game.topics()[0];
    format!(
        "n={} mu={} alpha={} beta={} gamma={} rho={}",
        game.creators(),
        t.mu(),
        t.alpha() * game.genai_agents() as f64,
        t.beta(),
        t.gamma(),
        game.costs().rho()
    )
}

fn rho_caveat(r: BoundReport, rho: f64) -> BoundReport {
    if rho > 1.0 && rho <= 2.0 {
        r
    } else {
        r.note(format!("rho={rho} outside (1, 2]; guarantee does not apply"))
    }
}

/// Total-content scaling: `1/(2 rho (1+alpha)) < s^(gamma+rho-1) / (mu ||c^-1||) < 1/rho`.
pub fn check_content_scaling(report: &EquilibriumReport, game: &Game) -> Result<BoundReport> {
    let t = single_topic(game)?;
    let rho = game.costs().rho();
    let alpha = t.alpha() * game.genai_agents() as f64;
    let norm = hadamard_inverse_norm(game.costs().coeffs(), rho)?;
    let s = report.s_star();
    let ratio = s.powf(t.gamma() + rho - 1.0) / (t.mu() * norm);
    let r = BoundReport::new(
        "total content scaling",
        ratio,
        1.0 / (2.0 * rho * (1.0 + alpha)),
        1.0 / rho,
        describe(game),
    );
    Ok(rho_caveat(r, rho))
}

/// Cost-gain balance for every creator:
/// `gain_i / (2 rho) < c_i x_i^rho < gain_i / rho` with
/// `gain_i = x_i mu / (s^gamma + alpha s^beta)`.
pub fn check_cost_balance(report: &EquilibriumReport, game: &Game) -> Result<Vec<BoundReport>> {
    let t = single_topic(game)?;
    let rho = game.costs().rho();
    let alpha = t.alpha() * game.genai_agents() as f64;
    let efforts = report.efforts();
    let s = report.s_star();
    let denom = s.powf(t.gamma()) + alpha * s.powf(t.beta());
    let context = describe(game);
    Ok((0..game.creators())
        .map(|i| {
            let x = efforts.get(i, 0);
            let gain = x * t.mu() / denom;
            let cost = game.costs().coeffs()[i] * x.powf(rho);
            let r = BoundReport::new(
                format!("cost balance creator {i}"),
                cost,
                gain / (2.0 * rho),
                gain / rho,
                context.clone(),
            );
            rho_caveat(r, rho)
        })
        .collect())
}

/// No creator holds half of the content: `max_i x_i / s < 1/2`.
pub fn check_max_share(report: &EquilibriumReport) -> BoundReport {
    let efforts = report.efforts();
    let s = report.s_star();
    let top = efforts.as_slice().iter().copied().fold(0.0, f64::max);
    let share = if s > 0.0 { top / s } else { f64::NAN };
    BoundReport::new(
        "max content share",
        share,
        0.0,
        0.5,
        format!("n={}", efforts.creators()),
    )
}

/// Lower bound on the GenAI fraction `m/n` at the cost-ordered equilibrium:
/// `m/n > 1 - C mu^e / (alpha n^(1 - e (rho-1)))` with
/// `e = (gamma-beta)/(gamma+rho-1)` and
/// `C = 2(2rho-1)/rho * (rho c_1)^(-e)`.
///
/// A bound at or below zero is vacuous: the report passes and is noted as
/// uninformative.
pub fn adoption_bound(genai: usize, game: &Game) -> Result<BoundReport> {
    let t = single_topic(game)?;
    let n = game.creators();
    let rho = game.costs().rho();
    let c1 = game.costs().coeffs()[game.cost_order()[0]];
    let (beta, gamma) = (t.beta(), t.gamma());
    let e = (gamma - beta) / (gamma + rho - 1.0);
    let constant = 2.0 * (2.0 * rho - 1.0) / rho * (rho * c1).powf(-e);
    let lower = if t.alpha() > 0.0 {
        1.0 - constant * t.mu().powf(e) / (t.alpha() * (n as f64).powf(1.0 - e * (rho - 1.0)))
    } else {
        f64::NEG_INFINITY
    };
    let value = genai as f64 / n as f64;
    let mut r = BoundReport::new(
        "genai fraction",
        value,
        lower,
        f64::INFINITY,
        format!("m={genai} {}", describe(&game.with_genai_agents(1))),
    );
    if lower <= 0.0 {
        r.pass = true;
        r = r.note("uninformative: bound <= 0");
    }
    if t.beta_raw() + t.gamma_raw() < 1.0 {
        r = r.note("hypothesis beta_raw + gamma_raw >= 1 fails");
    }
    Ok(r)
}

/// Whether the existence hypothesis `beta_raw + gamma_raw >= 1` holds.
pub fn adoption_hypothesis(topic: &TopicParams) -> bool {
    topic.beta_raw() + topic.gamma_raw() >= 1.0
}
