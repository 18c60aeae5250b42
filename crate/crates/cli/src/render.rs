//! Plain-text rendering of reports.

use std::fmt::Write;
use std::io::IsTerminal;

use cuspcalc::verifier::{CurveSpec, Report};
use cuspcalc::{Status, Verdict};

#[derive(Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    /// Colour only when allowed and stdout is a terminal.
    pub fn detect(allowed: bool) -> Self {
        Style { color: allowed && std::io::stdout().is_terminal() }
    }

    fn status(&self, s: Status) -> String {
        let text = s.to_string();
        if !self.color {
            return text;
        }
        let code = match s {
            Status::Pass => "32",
            Status::Fail => "31;1",
            Status::NotApplicable => "33",
        };
        format!("\x1b[{code}m{text}\x1b[0m")
    }

    fn verdict(&self, v: &Verdict) -> String {
        format!("[{}] {}: {}", self.status(v.status), v.name, v.detail)
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn report(spec: &CurveSpec, r: &Report, verbose: bool, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve: {spec}");
    let _ = writeln!(out, "cusps: {}  blow-ups: {}  genus: {}", r.n_cusps, r.n_blowups, r.genus);
    let bound = if r.n_cusps >= 3 { r.bound_rhs.to_string() } else { "n/a".into() };
    let _ = writeln!(
        out,
        "(C')^2 = {}  bound 7-3n = {bound}  D^2 = {}  K(K+D) = {}  D(K+D) = {}",
        r.c_prime_sq, r.d_sq, r.kkd, r.d_dot_kd
    );
    for (k, c) in r.cusps.iter().enumerate() {
        let _ = writeln!(
            out,
            "cusp {}: ({}) h={} eta=[{}] omega={} delta={} A=[{}] B=[{}]",
            k + 1,
            join(&c.multiplicities),
            c.h,
            join(&c.eta_per_stage),
            c.omega,
            c.delta,
            join(&c.a_chains),
            join(&c.b_chains)
        );
    }
    match &r.zariski.h_squared {
        Some(h2) => {
            let _ = writeln!(out, "zariski: ok  H^2 = {h2}");
            if verbose {
                for (label, coeff) in &r.zariski.negative_part {
                    let _ = writeln!(out, "  N[{label}] = {coeff}");
                }
            }
        }
        None => {
            let _ = writeln!(out, "zariski: {}", r.zariski.status);
        }
    }
    let _ = writeln!(out, "verdicts:");
    for v in &r.verdicts {
        if verbose || v.status != Status::Pass {
            let _ = writeln!(out, "  {}", style.verdict(v));
        }
    }
    let passed = r.verdicts.iter().filter(|v| v.status == Status::Pass).count();
    let failed = r.failures().count();
    let _ = writeln!(out, "  {passed} pass, {failed} fail, {} n/a", r.verdicts.len() - passed - failed);
    out
}

pub struct Row<'a> {
    pub name: &'a str,
    pub report: Option<&'a Report>,
    pub error: Option<&'a str>,
}

pub fn verify_table(rows: &[Row<'_>], properties: &[Verdict], verbose: bool, style: Style) -> String {
    let mut out = String::new();
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let _ = writeln!(out, "{:<width$}  {:>2}  {:>6}  {:>6}  {:>5}  verdicts", "name", "n", "(C')^2", "K(K+D)", "bound");
    for row in rows {
        match (row.report, row.error) {
            (Some(r), _) => {
                let bound = if r.n_cusps >= 3 { r.bound_rhs.to_string() } else { "n/a".into() };
                let failed = r.failures().count();
                let status = if failed == 0 { Status::Pass } else { Status::Fail };
                let applicable = r.verdicts.iter().filter(|v| v.status != Status::NotApplicable).count();
                let _ = writeln!(
                    out,
                    "{:<width$}  {:>2}  {:>6}  {:>6}  {:>5}  {} ({}/{applicable})",
                    row.name,
                    r.n_cusps,
                    r.c_prime_sq,
                    r.kkd,
                    bound,
                    style.status(status),
                    applicable - failed
                );
                for v in &r.verdicts {
                    if verbose || v.status == Status::Fail {
                        let _ = writeln!(out, "    {}", style.verdict(v));
                    }
                }
            }
            (None, err) => {
                let _ = writeln!(
                    out,
                    "{:<width$}  error: {}",
                    row.name,
                    err.unwrap_or("unknown")
                );
            }
        }
    }
    let _ = writeln!(out, "property sweeps:");
    for v in properties {
        let _ = writeln!(out, "  {}", style.verdict(v));
    }
    out
}
