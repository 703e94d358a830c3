//! One function per subcommand; each parses, delegates and emits.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Subcommand};
use serde_json::json;
use syzkit::bounds::{
    alternant_en_params, en_strand_bound, entropy_threshold_rates, goppa_en_params, gv_distance,
    improved_alternant_bound,
};
use syzkit::codes::{
    golay_11, golay_23, hamming_7_4, parity_code, pi_code, Family, FamilySpec, LinearCode,
};
use syzkit::distinguisher::{
    asymptotic_exponent, calibrate as run_calibration, classify, distance_distinguisher,
    heuristic_conditions, kappa_estimate, max_admissible_shortening, mceliece_audit, sample_rng,
    DistinguisherConfig, DistinguisherError, CLASSIC_MCELIECE, OMEGA,
};
use syzkit::gf::{Field, PolyMode};
use syzkit::report::{
    self, render_defect_stats, render_mceliece, Figure, ReportError, ReproduceOptions,
};
use syzkit::syzygy::{betti_diagram_reg2, linear_strand, BettiStrand, Budget, StrandOptions};

use crate::output::{peak_shape, Clock, CmdResult, Failure, Outcome, Table};
use crate::Global;

/// Returns an input error (exit 1).
macro_rules! fail {
    ($($t:tt)*) => {
        return Err(Failure::Input(anyhow!($($t)*)))
    };
}

/// Convention behind every `d_GV` this tool prints.
const GV_CONVENTION: &str = "largest d with sum_{i<d} C(n-1,i)(q-1)^i < q^(n-k)";

fn strand_options(g: &Global, keep_bases: bool) -> StrandOptions {
    StrandOptions {
        budget: Budget::from_gb(g.mem_cap_gb),
        keep_bases,
    }
}

fn read_code(path: &PathBuf) -> Result<LinearCode, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(
        LinearCode::from_text(&text, None)
            .with_context(|| format!("parsing {}", path.display()))?,
    )
}

/// Largest predicted `rows × cols`, counting a refused step.
fn strand_peak(strand: &BettiStrand) -> Option<(u64, u64)> {
    let refused = strand
        .refusal
        .as_ref()
        .map(|r| (r.predicted_rows, r.predicted_cols));
    peak_shape(&strand.steps)
        .into_iter()
        .chain(refused)
        .max_by_key(|&(r, c)| r.saturating_mul(c))
}

fn report_failure(e: ReportError) -> Failure {
    match e {
        ReportError::Budget(r) => Failure::Budget(r.to_string()),
        other => Failure::Input(other.into()),
    }
}

fn distinguisher_failure(e: DistinguisherError) -> Failure {
    match e {
        DistinguisherError::Budget(r) => Failure::Budget(r.to_string()),
        other => Failure::Input(other.into()),
    }
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    /// Code file: header `q n k`, then k generator rows.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Last degree r of `β_{r−1,r}` to compute (default k).
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Write each basis `B_r` as `B<r>.txt` with a `B<r>.labels` sidecar.
    #[arg(long)]
    pub dump_bases: Option<PathBuf>,
}

pub fn betti(g: &Global, a: BettiArgs) -> CmdResult {
    let clock = Clock::start();
    let code = read_code(&a.input)?;
    let (n, k) = (code.n(), code.k());
    let degree = a.max_degree.unwrap_or(k);
    if degree < 2 {
        fail!("--max-degree must be at least 2");
    }
    let strand = linear_strand(&code, degree, &strand_options(g, a.dump_bases.is_some()));
    let computed = if strand.refusal.is_some() {
        strand.computed_up_to
    } else {
        degree
    };
    // Past k every strand entry vanishes.
    let beta_strand: Vec<u64> = (2..=computed)
        .map(|r| {
            if r > k {
                0
            } else {
                strand.beta(r).unwrap_or(0)
            }
        })
        .collect();
    let complete = strand.vanished() || strand.computed_up_to >= k;
    let diagram = if complete {
        betti_diagram_reg2(&code, &strand).ok()
    } else {
        None
    };
    let regularity2 = syzkit::syzygy::square_dim(&code) == n;
    let r_max = complete.then(|| {
        strand
            .betas
            .iter()
            .rposition(|&b| b > 0)
            .map_or(1, |i| i + 2)
    });
    if let Some(dir) = &a.dump_bases {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for b in &strand.bases {
            let stem = dir.join(format!("B{}", b.degree));
            fs::write(stem.with_extension("txt"), b.basis.to_text())?;
            let mut labels = b.labels().join("\n");
            labels.push('\n');
            fs::write(stem.with_extension("labels"), labels)?;
        }
    }
    let result = json!({
        "n": n,
        "k": k,
        "q": code.q(),
        "beta_strand": beta_strand,
        "beta_row2": diagram.as_ref().map(|d| &d.row2),
        "r_max": r_max,
        "regularity2": regularity2,
        "defects": diagram.as_ref().map(|d| &d.defects),
        "refusal": strand.refusal,
    });
    let mut text = format!("[{n},{k}]_{} code\nstrand:", code.q());
    for (i, b) in beta_strand.iter().enumerate() {
        let _ = write!(text, " b{},{}={b}", i + 1, i + 2);
    }
    text.push('\n');
    match &diagram {
        Some(d) => text.push_str(&report::render_diagram(d)),
        None if !regularity2 => text.push_str("row 2 unavailable: regularity > 2\n"),
        None => text.push_str("row 2 unavailable: strand incomplete\n"),
    }
    if let Some(r) = &strand.refusal {
        let _ = writeln!(text, "stopped: {r}");
    }
    let mut table = Table::new(&["r", "beta_strand", "beta_row2", "defect"]);
    for (i, b) in beta_strand.iter().enumerate() {
        let r = i + 2;
        let row2 = diagram
            .as_ref()
            .and_then(|d| d.row2.get(r.wrapping_sub(3)))
            .filter(|_| r >= 3);
        let def = diagram.as_ref().and_then(|d| d.defects.get(i));
        table.push(vec![
            r.to_string(),
            b.to_string(),
            row2.map_or(String::new(), |v| v.to_string()),
            def.map_or(String::new(), |v| v.to_string()),
        ]);
    }
    let config = json!({"in": a.input, "max_degree": degree, "mem_cap_gb": g.mem_cap_gb});
    let mut out = Outcome::new("betti", config, result, text).with_table(table);
    out.peak = strand_peak(&strand);
    out.refusal = strand.refusal.as_ref().map(|r| r.to_string());
    clock.emit(g, out)
}

/// A random family: `--family goppa-dual --q 2 --m 6 --t 3 [--n 64] [--mode irr]`.
#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    /// alt-dual or goppa-dual.
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub t: Option<usize>,
    /// Code length (default q^m).
    #[arg(long)]
    pub n: Option<usize>,
    /// Goppa polynomials admitted: irr, sqfr or any.
    #[arg(long, default_value = "irr")]
    pub mode: PolyMode,
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, Failure> {
        let Some(family) = self.family else {
            return Ok(None);
        };
        let (Some(q), Some(m), Some(t)) = (self.q, self.m, self.t) else {
            return Err(Failure::Input(anyhow!("--family needs --q, --m and --t")));
        };
        Ok(Some(FamilySpec::new(family, q, m, t, self.n, self.mode)?))
    }

    fn require(&self) -> Result<FamilySpec, Failure> {
        self.spec()?
            .ok_or_else(|| Failure::Input(anyhow!("--family is required")))
    }
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Emit a fixed code instead: hamming, golay11, golay23, pi, parity<k>.
    #[arg(long, conflicts_with = "family")]
    pub builtin: Option<String>,
}

fn builtin(name: &str) -> Result<LinearCode, Failure> {
    Ok(match name {
        "hamming" => hamming_7_4(),
        "golay11" => golay_11(),
        "golay23" => golay_23(),
        "pi" => pi_code(),
        other => match other
            .strip_prefix("parity")
            .and_then(|k| k.parse::<usize>().ok())
        {
            Some(k) if k >= 1 => parity_code(&Field::prime(2)?, k),
            _ => {
                fail!("unknown built-in code `{other}` (hamming, golay11, golay23, pi, parity<k>)")
            }
        },
    })
}

pub fn construct(g: &Global, a: ConstructArgs) -> CmdResult {
    let (code, config, meta) = match &a.builtin {
        Some(name) => (builtin(name)?, json!({"builtin": name}), json!(null)),
        None => {
            let spec = a.family.require()?;
            let emb = spec.embedding()?;
            let mut rng = sample_rng(g.seed, 0);
            let s = spec.sample(&emb, &mut rng)?;
            let meta = json!({
                "support": s.support,
                "multiplier": s.multiplier,
                "goppa_polynomial": s.goppa,
                "retries": s.retries,
            });
            (s.code, json!({"family": spec}), meta)
        }
    };
    let text = code.to_text();
    let result = json!({"n": code.n(), "k": code.k(), "q": code.q(), "code": text, "sample": meta});
    Clock::start().emit(g, Outcome::new("construct", config, result, text))
}

#[derive(Args, Debug)]
pub struct DistinguishArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Target degree before shortening: `auto` takes f (alternant) or f̂ (binary Goppa).
    #[arg(long, default_value = "auto")]
    pub r_star: String,
    /// Shortening order: `auto` takes the largest admissible s.
    #[arg(long, default_value = "auto")]
    pub s: String,
    /// Calibrated `β*`; decides by `β ≥ β*` instead of `β > 0`.
    #[arg(long)]
    pub beta_star: Option<u64>,
    /// Use the minimum-distance test `d ≥ 2t+1` instead (binary only).
    #[arg(long)]
    pub distance: bool,
}

fn parse_auto(flag: &str, v: &str) -> Result<Option<usize>, Failure> {
    if v == "auto" {
        return Ok(None);
    }
    v.parse()
        .map(Some)
        .map_err(|_| Failure::Input(anyhow!("--{flag} takes `auto` or an integer, got `{v}`")))
}

pub fn distinguish(g: &Global, a: DistinguishArgs) -> CmdResult {
    let clock = Clock::start();
    let code = read_code(&a.input)?;
    let (n, k) = (code.n() as u64, code.k() as u64);
    if a.distance {
        let t = a.family.t.ok_or_else(|| anyhow!("--distance needs --t"))?;
        let v = distance_distinguisher(&code, t).map_err(distinguisher_failure)?;
        let text = format!(
            "{:?}: {} = {} ({})\n",
            v.decision, v.statistic_name, v.statistic, v.rule
        )
        .to_lowercase();
        return clock.emit(
            g,
            Outcome::new(
                "distinguish",
                json!({"in": a.input, "distance": true, "t": t}),
                v,
                text,
            ),
        );
    }
    let r_star = match parse_auto("r-star", &a.r_star)? {
        Some(r) => r,
        None => {
            let (family, q, t) = match (a.family.family, a.family.q, a.family.t) {
                (Some(f), Some(q), Some(t)) => (f, q, t as u64),
                _ => fail!("--r-star auto needs --family, --q and --t"),
            };
            match (family, q) {
                (Family::GoppaDual, 2) => goppa_en_params(t)?.f_hat as usize,
                _ => alternant_en_params(q, t)?.f as usize,
            }
        }
    };
    let s = match parse_auto("s", &a.s)? {
        Some(s) => s,
        None => {
            let s = max_admissible_shortening(n, k, r_star as u64)
                .ok_or_else(|| anyhow!("no admissible shortening for n={n}, k={k}, r*={r_star}"))?;
            (s as usize).min(r_star.saturating_sub(2))
        }
    };
    let cfg = DistinguisherConfig {
        r_star,
        s,
        beta_star: a.beta_star,
        seed: g.seed,
        strand: strand_options(g, false),
    };
    let v = classify(&code, &cfg).map_err(distinguisher_failure)?;
    let mut text = format!(
        "{}: {} = {} at degree {} after shortening {} positions (rule {})\n",
        match v.decision {
            syzkit::distinguisher::Decision::Special => "special",
            syzkit::distinguisher::Decision::Random => "random",
        },
        v.statistic_name,
        v.statistic,
        r_star - s,
        s,
        v.rule
    );
    for w in &v.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let config = json!({"in": a.input, "r_star": r_star, "s": s, "beta_star": a.beta_star, "mem_cap_gb": g.mem_cap_gb});
    clock.emit(g, Outcome::new("distinguish", config, v, text))
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    /// Last degree computed per sample (default k − s).
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Positions shortened in every sample.
    #[arg(long, default_value_t = 0)]
    pub s: usize,
}

pub fn calibrate(g: &Global, a: CalibrateArgs) -> CmdResult {
    let clock = Clock::start();
    let spec = a.family.require()?;
    let degree = a.max_degree.unwrap_or(spec.k().saturating_sub(a.s));
    let cal = run_calibration(
        &spec,
        a.samples,
        degree,
        a.s,
        g.seed,
        &strand_options(g, false),
    )
    .map_err(distinguisher_failure)?;
    let mut text = format!(
        "{} samples, s = {}\n{:>3} | {:>8} {:>8} {:>8} agree\n",
        a.samples, a.s, "r", "beta*", "min", "max"
    );
    let mut table = Table::new(&["r", "beta_star", "min", "max", "agree"]);
    for c in &cal.consensus {
        let _ = writeln!(
            text,
            "{:>3} | {:>8} {:>8} {:>8} {}",
            c.r, c.value, c.min, c.max, c.agree
        );
        table.push(vec![
            c.r.to_string(),
            c.value.to_string(),
            c.min.to_string(),
            c.max.to_string(),
            c.agree.to_string(),
        ]);
    }
    let config = json!({"family": spec, "samples": a.samples, "max_degree": degree, "s": a.s});
    clock.emit(
        g,
        Outcome::new("calibrate", config, cal, text).with_table(table),
    )
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct EstimateArgs {
    #[command(subcommand)]
    pub which: Option<EstimateCommand>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Complexity `log₂ κ` of the distinguisher on an `[n,k]_q` code.
    #[arg(long)]
    pub kappa: bool,
    /// GV estimates of `d` and `d⊥`.
    #[arg(long)]
    pub gv: bool,
    /// The two heuristic gates.
    #[arg(long)]
    pub conditions: bool,
    /// Linear-algebra exponent.
    #[arg(long, default_value_t = OMEGA)]
    pub omega: f64,
}

#[derive(Subcommand, Debug)]
pub enum EstimateCommand {
    /// Eagon–Northcott parameters and strand lower bounds.
    Bounds {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value_t = 0)]
        s: u64,
        #[arg(long)]
        r: u64,
    },
    /// Entropy thresholds `R₁ < R₂`, and optionally the asymptotic exponent.
    Entropy {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        n: Option<f64>,
        #[arg(long, default_value_t = OMEGA)]
        omega: f64,
    },
}

/// Four significant digits.
fn sig4(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let digits = x.abs().log10().floor() as i32 + 1;
    format!("{:.*}", (4 - digits).max(0) as usize, x)
}

pub fn estimate(g: &Global, a: EstimateArgs) -> CmdResult {
    match a.which {
        Some(EstimateCommand::Bounds { q, m, t, s, r }) => {
            let alt = alternant_en_params(q, t)?;
            let goppa = if q == 2 {
                Some(goppa_en_params(t)?)
            } else {
                None
            };
            let result = json!({
                "en_params": alt,
                "goppa_en_params": goppa,
                "alternant_strand_bound": en_strand_bound(alt.f, s, r, m).to_string(),
                "goppa_strand_bound": goppa.map(|p| en_strand_bound(p.f_hat, s, r, m).to_string()),
                "improved_alternant_bound": improved_alternant_bound(m, q, t, r)?.to_string(),
            });
            let text = format!("{}\n", serde_json::to_string_pretty(&result)?);
            let config = json!({"q": q, "m": m, "t": t, "s": s, "r": r});
            Clock::start().emit(g, Outcome::new("estimate bounds", config, result, text))
        }
        Some(EstimateCommand::Entropy { q, rate, n, omega }) => {
            let (r1, r2) = entropy_threshold_rates(q);
            let exponent = match (rate, n) {
                (Some(rate), Some(n)) if rate > 0.0 && rate < 1.0 && n > 1.0 => {
                    Some(asymptotic_exponent(q as f64, rate, n, omega))
                }
                (None, None) => None,
                _ => fail!("--rate needs --n, with 0 < rate < 1 and n > 1"),
            };
            let result = json!({"r1": r1, "r2": r2, "log_q_kappa_leading": exponent});
            let mut text = format!("R1 = {r1:.5}\nR2 = {r2:.5}\n");
            if let Some(e) = exponent {
                let _ = writeln!(text, "log_q kappa ~ {}", sig4(e));
            }
            let config = json!({"q": q, "rate": rate, "n": n, "omega": omega});
            Clock::start().emit(g, Outcome::new("estimate entropy", config, result, text))
        }
        None => {
            let (Some(q), Some(n), Some(k)) = (a.q, a.n, a.k) else {
                fail!("estimate needs --q, --n and --k (or a subcommand: bounds, entropy)");
            };
            if k == 0 || k >= n {
                fail!("need 0 < k < n, got n={n}, k={k}");
            }
            let all = !(a.kappa || a.gv || a.conditions);
            let mut result = serde_json::Map::new();
            let mut text = String::new();
            if a.kappa || all {
                let est = kappa_estimate(q, n, k, a.omega);
                let _ = writeln!(text, "log2 kappa = {}", sig4(est.log2_kappa));
                if est.unsupported {
                    text.push_str("warning: the dual distance gate fails; the estimate lacks heuristic support\n");
                }
                result.insert("log2_kappa".into(), json!(est.log2_kappa));
                result.insert("kappa".into(), serde_json::to_value(&est)?);
            }
            if a.gv || all {
                let (d, dd) = (gv_distance(q, n, k), gv_distance(q, n, n - k));
                let _ = writeln!(text, "d_GV = {d}\nd_GV(dual) = {dd}");
                result.insert(
                    "gv".into(),
                    json!({"d_gv": d, "d_dual_gv": dd, "convention": GV_CONVENTION}),
                );
            }
            if a.conditions || all {
                let c = heuristic_conditions(q, n, k);
                let _ = writeln!(
                    text,
                    "ratio = {:.4}\ncond1 (d > k + 1 - ratio): {} (margin {:.3})\ncond2 (d_dual > ratio): {} (margin {:.3})",
                    c.ratio, c.cond1, c.margin1, c.cond2, c.margin2
                );
                result.insert("conditions".into(), serde_json::to_value(&c)?);
            }
            let config = json!({"q": q, "n": n, "k": k, "omega": a.omega, "kappa": a.kappa, "gv": a.gv, "conditions": a.conditions});
            Clock::start().emit(g, Outcome::new("estimate", config, result, text))
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum AuditCommand {
    /// The five Classic McEliece parameter sets.
    Mceliece {
        #[arg(long, default_value_t = OMEGA)]
        omega: f64,
    },
}

pub fn audit(g: &Global, which: AuditCommand) -> CmdResult {
    let AuditCommand::Mceliece { omega } = which;
    let mut rows = mceliece_audit(&CLASSIC_MCELIECE).map_err(distinguisher_failure)?;
    if omega != OMEGA {
        for p in &mut rows {
            p.log2_kappa = kappa_estimate(2, p.n_s, p.k_s, omega).log2_kappa;
        }
    }
    let mut table = Table::new(&[
        "n",
        "m",
        "t",
        "k",
        "r_star",
        "s",
        "n_s",
        "k_s",
        "ratio",
        "d_gv",
        "d_dual_gv",
        "cond1",
        "cond2",
        "log2_kappa",
        "parenthesized",
    ]);
    for p in &rows {
        table.push(vec![
            p.n.to_string(),
            p.m.to_string(),
            p.t.to_string(),
            p.k.to_string(),
            p.r_star.to_string(),
            p.s.to_string(),
            p.n_s.to_string(),
            p.k_s.to_string(),
            format!("{:.2}", p.conditions.ratio),
            p.conditions.d_gv.to_string(),
            p.conditions.d_dual_gv.to_string(),
            p.conditions.cond1.to_string(),
            p.conditions.cond2.to_string(),
            format!("{:.4}", p.log2_kappa),
            p.parenthesized.to_string(),
        ]);
    }
    let text = render_mceliece(&rows);
    let config = json!({"omega": omega, "gv_convention": GV_CONVENTION});
    Clock::start().emit(
        g,
        Outcome::new("audit mceliece", config, rows, text).with_table(table),
    )
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    /// fig-hamming, fig-golay3, fig-golay2, fig-parity9, fig-grs15, fig-pi,
    /// tab-alt-2-10-5, tab-goppa-4-4-4, tab-mceliece or tab-statdef-<d>-<d_dual>.
    pub id: String,
    /// Samples per cell of the sampled tables.
    #[arg(long, default_value_t = 5)]
    pub samples: usize,
    /// Smallest shortening order in the alternant table.
    #[arg(long, default_value_t = 3)]
    pub s_min: usize,
}

pub fn reproduce(g: &Global, a: ReproduceArgs) -> CmdResult {
    let clock = Clock::start();
    let fig: Figure = a.id.parse().map_err(report_failure)?;
    let opts = ReproduceOptions {
        seed: g.seed,
        samples: a.samples,
        s_min: a.s_min,
        strand: strand_options(g, false),
    };
    let rep = report::reproduce(fig, &opts).map_err(report_failure)?;
    let config = json!({"id": rep.id, "samples": a.samples, "s_min": a.s_min});
    let mut out = Outcome::new("reproduce", config, &rep.payload, rep.text.clone());
    if let Some(steps) = rep.payload.pointer("/strand/steps") {
        let steps: Vec<(u64, u64)> = steps
            .as_array()
            .into_iter()
            .flatten()
            .filter_map(|s| Some((s.get("rows")?.as_u64()?, s.get("cols")?.as_u64()?)))
            .collect();
        out.peak = steps.into_iter().max_by_key(|&(r, c)| r.saturating_mul(c));
    }
    clock.emit(g, out)
}

#[derive(Args, Debug)]
pub struct DefectStatsArgs {
    #[arg(long, default_value_t = 56)]
    pub n: usize,
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Exact minimum distance of every sample.
    #[arg(long)]
    pub d: usize,
    /// Exact dual distance of every sample.
    #[arg(long)]
    pub d_dual: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 2)]
    pub r_min: usize,
    #[arg(long, default_value_t = 8)]
    pub r_max: usize,
}

pub fn defect_stats(g: &Global, a: DefectStatsArgs) -> CmdResult {
    let clock = Clock::start();
    if a.r_min < 2 || a.r_min > a.r_max {
        fail!("need 2 ≤ r-min ≤ r-max");
    }
    let field = Field::with_order(a.q)?;
    let t = report::defect_stats(
        &field,
        a.n,
        a.k,
        a.d,
        a.d_dual,
        a.samples,
        g.seed,
        a.r_min..=a.r_max,
        &strand_options(g, false),
    )
    .map_err(report_failure)?;
    let mut table = Table::new(&["r", "mean", "lo", "hi"]);
    for row in &t.rows {
        table.push(vec![
            row.r.to_string(),
            format!("{:.3}", row.mean),
            row.lo.to_string(),
            row.hi.to_string(),
        ]);
    }
    let text = render_defect_stats(&t);
    let config = json!({
        "n": a.n, "k": a.k, "q": a.q, "d": a.d, "d_dual": a.d_dual,
        "samples": a.samples, "r_min": a.r_min, "r_max": a.r_max,
    });
    clock.emit(
        g,
        Outcome::new("defect-stats", config, t, text).with_table(table),
    )
}
