use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};
use vmv_core::corekit::{parse_rational, rational_string, Rational};
use vmv_core::counting::n_ratio_report;
use vmv_core::exppair::{
    eval_word, pair_bound_with_slack, search_words, theorem2_pair, ExponentPair, Objective,
    ProcessWord,
};
use vmv_core::expsum::{compare, Family, PhaseFunction};
use vmv_core::meanvalue::{
    exponent_trend, jsl_count_with_budget, jsl_naive, DEFAULT_MEMORY_BUDGET,
};
use vmv_core::zetabounds::{
    empirical_exponent, kappa_check, kappa_digits, verification_battery, PhiTau, DEFAULT_K_MAX,
    MAX_T,
};
use vmv_core::{Error, Result};

use crate::output::{real, Report};

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent pairs: process words, the derivative-estimate family, word search.
    #[command(subcommand)]
    Exppair(ExppairCmd),
    /// Exact solution counts of the Vinogradov system.
    #[command(subcommand)]
    Mvt(MvtCmd),
    /// Exponential sums against their upper bounds.
    #[command(subcommand)]
    Expsum(ExpsumCmd),
    /// Pair counts of close scaled derivatives.
    #[command(subcommand)]
    Count(CountCmd),
    /// The exponent function phi(tau), its inequality checks, and zeta main sums.
    #[command(subcommand)]
    Zeta(ZetaCmd),
    /// Runs the published reference values and the exact battery.
    Selftest,
}

#[derive(Debug, Subcommand)]
pub enum ExppairCmd {
    /// Applies a word over {A, B} (rightmost symbol first) to a starting pair.
    Eval {
        /// For example AABAAB or A^2BA^2B; an empty string is the identity.
        word: String,
        /// Starting pair as "p q".
        #[arg(long, default_value = "0 1")]
        from: String,
    },
    /// The pair attached to the k-th derivative estimate.
    Theorem2 {
        k: u32,
        /// Also evaluate (T/N)^p N^(q + slack) at this T (needs --n).
        #[arg(long, requires = "n")]
        t: Option<f64>,
        #[arg(long, requires = "t")]
        n: Option<f64>,
        #[arg(long, default_value_t = 1e-6)]
        slack: f64,
    },
    /// Minimizes alpha p + beta q over all words up to a length.
    Search {
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value = "0")]
        alpha: String,
        #[arg(long, default_value = "1")]
        beta: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum MvtCmd {
    /// J_{s,l}(P).
    Count {
        s: u32,
        l: u32,
        p: u64,
        /// Use direct enumeration instead of hashing.
        #[arg(long)]
        naive: bool,
        /// Memory budget in bytes for the hashing counter.
        #[arg(long, default_value_t = DEFAULT_MEMORY_BUDGET)]
        memory_budget: u64,
    },
    /// Fitted growth exponent of J_{s,l}(P) over a list of P.
    Trend {
        s: u32,
        l: u32,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyKind {
    Monomial,
    Logphase,
    Polynomial,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    /// Monomial coefficient in y x^c.
    #[arg(long)]
    y: Option<f64>,
    /// Monomial exponent in y x^c.
    #[arg(long)]
    c: Option<f64>,
    /// Height in -t ln(x) / (2 pi).
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated rational coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<String>,
}

impl FamilyArgs {
    fn family(&self) -> Result<Family> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("--{name} is required for this family")))
        };
        Ok(match self.family {
            FamilyKind::Monomial => Family::Monomial {
                y: need(self.y, "y")?,
                c: need(self.c, "c")?,
            },
            FamilyKind::Logphase => Family::LogPhase {
                t: need(self.t, "t")?,
            },
            FamilyKind::Polynomial => Family::Polynomial {
                coeffs: self
                    .coeffs
                    .iter()
                    .map(|c| parse_rational(c))
                    .collect::<Result<_>>()?,
            },
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum ExpsumCmd {
    /// Empirical |sum e(f(n))| on (start, start+len] alongside every applicable bound.
    Compare {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        start: u64,
        #[arg(long)]
        len: u64,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        k: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CountCmd {
    /// Pair counts on (N, 2N] for each N, with H taken from the derivative box.
    Report {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZetaCmd {
    /// Exact segments of phi(tau).
    Table {
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// Every exact check on phi(tau), the 49/80 inequalities and kappa.
    Verify {
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// kappa to many digits and the numeric maximization check.
    Kappa {
        #[arg(long, default_value_t = 40)]
        digits: u32,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7,0.9")]
        sigma: Vec<f64>,
    },
    /// Main sums over a geometric grid of t and the fitted growth exponent.
    Curve {
        #[arg(long)]
        sigma: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
}

/// Settings that apply to every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    /// Largest `t` the zeta commands accept.
    pub max_t: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { max_t: MAX_T }
    }
}

fn rs(r: &Rational) -> String {
    rational_string(r)
}

fn parse_pair(s: &str) -> Result<ExponentPair> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected \"p q\", got {s:?}")));
    }
    ExponentPair::new(parse_rational(parts[0])?, parse_rational(parts[1])?)
}

fn pair_json(p: &ExponentPair) -> Value {
    json!({ "p": rs(p.p()), "q": rs(p.q()) })
}

pub fn run(cmd: &Command, settings: Settings) -> Result<Report> {
    match cmd {
        Command::Exppair(c) => exppair(c),
        Command::Mvt(c) => mvt(c),
        Command::Expsum(c) => expsum(c),
        Command::Count(c) => count(c),
        Command::Zeta(c) => zeta(c, settings),
        Command::Selftest => Ok(crate::selftest::run()),
    }
}

/// The text printed by `exppair eval`.
pub fn eval_text(word: &str, from: &str) -> Result<String> {
    let w = ProcessWord::parse(word)?;
    Ok(eval_word(&w, &parse_pair(from)?).to_string())
}

fn exppair(cmd: &ExppairCmd) -> Result<Report> {
    match cmd {
        ExppairCmd::Eval { word, from } => {
            let w = ProcessWord::parse(word)?;
            let pair = eval_word(&w, &parse_pair(from)?);
            let mut r = Report::new("exppair eval").header(&["word", "p", "q"]);
            r.text = pair.to_string();
            r.row(vec![w.to_string(), rs(pair.p()), rs(pair.q())]);
            r.data =
                json!({ "word": w.to_string(), "compact": w.compact(), "pair": pair_json(&pair) });
            Ok(r)
        }
        ExppairCmd::Theorem2 { k, t, n, slack } => {
            let pair = theorem2_pair(*k)?;
            let bound = match (t, n) {
                (Some(t), Some(n)) => Some(pair_bound_with_slack(&pair, *t, *n, *slack)?),
                _ => None,
            };
            let mut r = Report::new("exppair theorem2").header(&["k", "p", "q", "bound"]);
            r.text = match bound {
                Some(b) => format!("{pair}\n{}", real(b)),
                None => pair.to_string(),
            };
            r.row(vec![
                k.to_string(),
                rs(pair.p()),
                rs(pair.q()),
                bound.map(real).unwrap_or_default(),
            ]);
            r.data = json!({ "k": k, "pair": pair_json(&pair), "slack": slack, "bound": bound });
            Ok(r)
        }
        ExppairCmd::Search {
            max_len,
            alpha,
            beta,
        } => {
            let objective = Objective::new(parse_rational(alpha)?, parse_rational(beta)?);
            let best = search_words(*max_len, &objective)?;
            let mut r =
                Report::new("exppair search").header(&["word", "p", "q", "score", "evaluated"]);
            let shown = if best.word.is_empty() {
                "()".to_string()
            } else {
                best.word.compact()
            };
            r.text = format!(
                "{shown}\t{}\tscore {}\t({} words)",
                best.pair, best.score, best.evaluated
            );
            r.row(vec![
                best.word.to_string(),
                rs(best.pair.p()),
                rs(best.pair.q()),
                rs(&best.score),
                best.evaluated.to_string(),
            ]);
            r.data = json!({
                "objective": { "alpha": rs(&objective.alpha), "beta": rs(&objective.beta) },
                "max_len": max_len,
                "word": best.word.to_string(),
                "pair": pair_json(&best.pair),
                "score": rs(&best.score),
                "evaluated": best.evaluated,
            });
            Ok(r)
        }
    }
}

const MVT_HEADER: [&str; 5] = ["s", "l", "P", "count", "log-slope"];

fn mvt(cmd: &MvtCmd) -> Result<Report> {
    match cmd {
        MvtCmd::Count {
            s,
            l,
            p,
            naive,
            memory_budget,
        } => {
            let res = if *naive {
                jsl_naive(*s, *l, *p)?
            } else {
                jsl_count_with_budget(*s, *l, *p, *memory_budget)?
            };
            let mut r = Report::new("mvt count").header(&MVT_HEADER);
            r.text = res.count.to_string();
            r.row(vec![
                s.to_string(),
                l.to_string(),
                p.to_string(),
                res.count.to_string(),
                String::new(),
            ]);
            r.data = json!({ "s": s, "l": l, "P": p, "count": res.count.to_string() });
            Ok(r)
        }
        MvtCmd::Trend { s, l, p } => {
            let t = exponent_trend(*s, *l, p)?;
            let mut r = Report::new("mvt trend").header(&MVT_HEADER);
            let mut text = String::from("P\tcount\tlocal slope\n");
            for (row, local) in t.rows.iter().zip(&t.local_slopes) {
                let local = local.map(real).unwrap_or_default();
                text.push_str(&format!("{}\t{}\t{}\n", row.p, row.count, local));
                r.row(vec![
                    s.to_string(),
                    l.to_string(),
                    row.p.to_string(),
                    row.count.to_string(),
                    local,
                ]);
            }
            text.push_str(&format!(
                "fitted slope {}\treference max(s, 2s - l(l+1)/2) = {}\n",
                real(t.slope),
                real(t.reference_exponent)
            ));
            r.text = text;
            r.data = json!({
                "s": s,
                "l": l,
                "rows": t.rows.iter().zip(&t.local_slopes).map(|(row, local)| json!({
                    "P": row.p,
                    "count": row.count.to_string(),
                    "log_slope": local,
                })).collect::<Vec<_>>(),
                "slope": t.slope,
                "bdg_exponent": rs(&t.bdg.exponent),
                "in_optimal_range": t.bdg.in_optimal_range,
                "reference_exponent": t.reference_exponent,
            });
            Ok(r)
        }
    }
}

fn expsum(cmd: &ExpsumCmd) -> Result<Report> {
    let ExpsumCmd::Compare {
        family,
        start,
        len,
        k,
    } = cmd;
    let f = PhaseFunction::new(family.family()?, *start, *len)?;
    let reports = compare(&f, k)?;
    let mut r = Report::new("expsum compare").header(&[
        "family",
        "N",
        "k",
        "lambda",
        "A",
        "empirical",
        "method",
        "bound",
        "ratio",
    ]);
    let mut text = String::new();
    for b in &reports {
        text.push_str(&format!(
            "k={} lambda={} A={} empirical={}\n",
            b.k,
            real(b.lambda),
            real(b.a),
            real(b.empirical)
        ));
        for (name, v) in &b.bounds {
            text.push_str(&format!(
                "  {name}\t{}\tratio {}\n",
                real(*v),
                real(b.ratios[name])
            ));
            r.row(vec![
                b.family.clone(),
                b.n.to_string(),
                b.k.to_string(),
                real(b.lambda),
                real(b.a),
                real(b.empirical),
                name.clone(),
                real(*v),
                real(b.ratios[name]),
            ]);
        }
        for (name, why) in &b.omitted {
            text.push_str(&format!("  {name}\tomitted: {why}\n"));
        }
    }
    r.text = text;
    r.data = serde_json::to_value(&reports).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(r)
}

fn count(cmd: &CountCmd) -> Result<Report> {
    let CountCmd::Report { family, k, n } = cmd;
    let rows = n_ratio_report(&family.family()?, *k, n)?;
    let mut r = Report::new("count report")
        .header(&["N", "k", "H", "countN", "countN1", "n2bound", "ratio"]);
    for row in &rows {
        r.row(vec![
            row.n.to_string(),
            row.k.to_string(),
            row.h.to_string(),
            row.count_n.to_string(),
            row.count_n1.to_string(),
            real(row.n2_bound),
            real(row.ratio),
        ]);
    }
    r.data = serde_json::to_value(&rows).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(r)
}

fn zeta(cmd: &ZetaCmd, settings: Settings) -> Result<Report> {
    match cmd {
        ZetaCmd::Table { k_max } => {
            let table = PhiTau::new(*k_max)?;
            let mut r = Report::new("zeta table").header(&["k", "lo", "hi", "slope", "intercept"]);
            for s in &table.segments {
                r.row(vec![
                    s.k.to_string(),
                    rs(&s.lo),
                    rs(&s.hi),
                    rs(&s.slope),
                    rs(&s.intercept),
                ]);
            }
            r.data = serde_json::to_value(&table).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(r)
        }
        ZetaCmd::Verify { k_max } => {
            Ok(checks_report("zeta verify", verification_battery(*k_max)?))
        }
        ZetaCmd::Kappa { digits, sigma } => {
            let checks = sigma
                .iter()
                .map(|&s| kappa_check(s))
                .collect::<Result<Vec<_>>>()?;
            let digits = kappa_digits(*digits);
            let mut r = Report::new("zeta kappa").header(&[
                "sigma",
                "tau_star",
                "closed_form",
                "numeric",
                "residual",
            ]);
            let mut text = format!("kappa = {digits}\n");
            for c in &checks {
                text.push_str(&format!(
                    "sigma={} tau*={} max={} numeric={} residual={}\n",
                    real(c.sigma),
                    real(c.tau_star),
                    real(c.closed_form),
                    real(c.numeric),
                    real(c.residual)
                ));
                r.row(vec![
                    real(c.sigma),
                    real(c.tau_star),
                    real(c.closed_form),
                    real(c.numeric),
                    real(c.residual),
                ]);
                if c.residual > 1e-10 {
                    r.failures
                        .push(format!("kappa maximum at sigma={}", c.sigma));
                }
            }
            r.text = text;
            r.data = json!({ "kappa": digits, "checks": checks });
            Ok(r)
        }
        ZetaCmd::Curve { sigma, t } => {
            let budget = settings.max_t.min(MAX_T);
            if let Some(bad) = t.iter().find(|&&x| x > budget) {
                return Err(Error::Precision(format!(
                    "t = {bad} exceeds the budget {budget:e}"
                )));
            }
            let trend = empirical_exponent(*sigma, t)?;
            let mut r = Report::new("zeta curve").header(&[
                "sigma",
                "t",
                "modulus",
                "fitted_exponent",
                "theory_exponent",
                "ford_exponent",
            ]);
            for p in &trend.points {
                r.row(vec![
                    real(p.sigma),
                    real(p.t),
                    real(p.main_sum_modulus),
                    real(trend.fitted_exponent),
                    real(trend.theory_exponent),
                    real(trend.ford_exponent),
                ]);
            }
            r.data = serde_json::to_value(&trend).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(r)
        }
    }
}

/// A table of named checks; failures are listed in the report.
pub fn checks_report(command: &str, checks: Vec<vmv_core::zetabounds::Check>) -> Report {
    let mut r = Report::new(command).header(&["check", "ok", "detail"]);
    let mut text = String::new();
    for c in &checks {
        let status = if c.ok { "OK" } else { "FAILED" };
        if c.detail.is_empty() {
            text.push_str(&format!("{} {status}\n", c.name));
        } else {
            text.push_str(&format!("{} {status} ({})\n", c.name, c.detail));
        }
        r.row(vec![c.name.clone(), c.ok.to_string(), c.detail.clone()]);
        if !c.ok {
            r.failures.push(c.name.clone());
        }
    }
    r.text = text;
    r.data = json!({ "checks": checks });
    r
}
