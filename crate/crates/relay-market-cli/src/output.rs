//! Report structures and CSV/JSON emission.
//!
//! Every float in CSV output is printed with thirteen significant digits
//! so that serialized results round-trip through text. Column orders are
//! fixed and documented in the README.

use serde::Serialize;

use relay_market::harness::{RateRow, SweepRecord};
use relay_market::model::Scenario;
use relay_market::pricing::PricingSolution;

pub fn fmt(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let mut out =
        String::from("swept_value,scheme,lambda,power_sold,revenue,sum_rate,fairness,n_trials\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt(r.swept_value),
            r.scheme.tag(),
            fmt(r.lambda),
            fmt(r.power_sold),
            fmt(r.revenue),
            fmt(r.sum_rate),
            fmt(r.fairness),
            r.n_trials
        ));
    }
    out
}

pub fn rate_table_csv(rows: &[RateRow]) -> String {
    let mut out = String::from("lambda,scheme,rate1,rate2,rate3,fairness,sum_rate\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(r.lambda),
            r.scheme.tag(),
            fmt(r.rates[0]),
            fmt(r.rates[1]),
            fmt(r.rates[2]),
            fmt(r.fairness),
            fmt(r.sum_rate)
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SchemeReport {
    pub scheme: &'static str,
    pub powers: Vec<f64>,
    pub rates: Vec<f64>,
    pub utilities: Vec<f64>,
    pub power_sold: f64,
    pub revenue: f64,
    pub sum_rate: f64,
    pub fairness: f64,
}

#[derive(Debug, Serialize)]
pub struct AllocateReport {
    pub scenario: Scenario,
    pub lambda: f64,
    pub selected: &'static str,
    pub schemes: Vec<SchemeReport>,
}

pub fn allocation_csv(report: &AllocateReport) -> String {
    let mut out = String::from("scheme,user,power,rate,utility\n");
    for s in &report.schemes {
        for i in 0..s.powers.len() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.scheme,
                i + 1,
                fmt(s.powers[i]),
                fmt(s.rates[i]),
                fmt(s.utilities[i])
            ));
        }
    }
    out
}

#[derive(Debug, Serialize)]
pub struct PriceReport {
    pub scenario: Scenario,
    pub solution: PricingSolution,
}

pub fn price_csv(report: &PriceReport) -> String {
    let sol = &report.solution;
    let mut out = String::from("record,interval,lambda,revenue\n");
    out.push_str(&format!(
        "optimum,,{},{}\n",
        fmt(sol.lambda_star),
        fmt(sol.revenue)
    ));
    for c in &sol.candidates {
        out.push_str(&format!(
            "candidate,{},{},{}\n",
            c.interval,
            fmt(c.lambda),
            fmt(c.revenue)
        ));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub scenario: Scenario,
    pub records: Vec<SweepRecord>,
}
