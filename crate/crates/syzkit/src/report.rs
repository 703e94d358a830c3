//! Experiment drivers shared by the command line and the acceptance suite:
//! figure and table reproduction, defect statistics and text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::seq::index;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{closed_form_diagram, ClosedForm};
use crate::codes::{
    golay_11, golay_23, grs_code, hamming_7_4, parity_code, pi_code, CodeError, Family, FamilySpec,
    LinearCode, SupportMultiplier,
};
use crate::distinguisher::{mceliece_audit, sample_rng, McElieceParamSet, CLASSIC_MCELIECE};
use crate::gf::{Field, PolyMode};
use crate::syzygy::{
    betti_diagram_reg2, defect, linear_strand, BettiDiagram, BettiStrand, Refusal, StrandOptions,
    SyzygyError,
};

/// Version of every JSON payload the command line emits.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown figure `{0}`; known: {known}", known = FIGURE_IDS.join(", "))]
    UnknownFigure(String),
    #[error("budget refusal: {0}")]
    Budget(Refusal),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Syzygy(#[from] SyzygyError),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, ReportError>;

pub const FIGURE_IDS: [&str; 10] = [
    "fig-hamming",
    "fig-golay3",
    "fig-golay2",
    "fig-parity9",
    "fig-grs15",
    "fig-pi",
    "tab-alt-2-10-5",
    "tab-goppa-4-4-4",
    "tab-mceliece",
    "tab-statdef-<d>-<d_dual>",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Hamming,
    Golay3,
    Golay2,
    Parity9,
    Grs15,
    Pi,
    Alt2105,
    Goppa444,
    McEliece,
    Statdef { d: usize, d_dual: usize },
}

impl FromStr for Figure {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Figure> {
        Ok(match s {
            "fig-hamming" => Figure::Hamming,
            "fig-golay3" => Figure::Golay3,
            "fig-golay2" => Figure::Golay2,
            "fig-parity9" => Figure::Parity9,
            "fig-grs15" => Figure::Grs15,
            "fig-pi" => Figure::Pi,
            "tab-alt-2-10-5" => Figure::Alt2105,
            "tab-goppa-4-4-4" => Figure::Goppa444,
            "tab-mceliece" => Figure::McEliece,
            other => {
                let cell = other.strip_prefix("tab-statdef-").and_then(|rest| {
                    let (d, dd) = rest.split_once('-')?;
                    Some((d.parse().ok()?, dd.parse().ok()?))
                });
                match cell {
                    Some((d, d_dual)) => Figure::Statdef { d, d_dual },
                    None => return Err(ReportError::UnknownFigure(other.to_string())),
                }
            }
        })
    }
}

/// Knobs for the sampled tables.
#[derive(Clone, Copy, Debug)]
pub struct ReproduceOptions {
    pub seed: u64,
    /// Samples per cell (sampled tables only).
    pub samples: usize,
    /// Smallest shortening order in the alternant table.
    pub s_min: usize,
    pub strand: StrandOptions,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            seed: 1,
            samples: 5,
            s_min: 3,
            strand: StrandOptions::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reproduction {
    pub id: String,
    pub text: String,
    pub payload: serde_json::Value,
}

/// A code's strand and, when it has regularity 2, its diagram.
#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub strand: BettiStrand,
    pub diagram: Option<BettiDiagram>,
    /// Predicted diagram, for codes with a closed form.
    pub predicted: Option<BettiDiagram>,
}

/// The full strand of `code` and its diagram.
pub fn diagram_report(code: &LinearCode, opts: &StrandOptions) -> Result<DiagramReport> {
    let strand = linear_strand(code, code.k(), opts);
    if let Some(r) = &strand.refusal {
        return Err(ReportError::Budget(r.clone()));
    }
    let diagram = Some(betti_diagram_reg2(code, &strand)?);
    Ok(DiagramReport {
        strand,
        diagram,
        predicted: None,
    })
}

/// The `[15, 8]` GRS code on a seeded support over GF(16).
pub fn grs_15_8(seed: u64) -> Result<LinearCode> {
    let f = Field::with_order(16).map_err(CodeError::from)?;
    let mut rng = sample_rng(seed, 0);
    let sm = SupportMultiplier::random(&f, 15, &mut rng)?;
    Ok(grs_code(&sm, 8)?)
}

pub fn reproduce(fig: Figure, opts: &ReproduceOptions) -> Result<Reproduction> {
    let (id, text, payload) = match fig {
        Figure::Hamming
        | Figure::Golay3
        | Figure::Golay2
        | Figure::Parity9
        | Figure::Grs15
        | Figure::Pi => {
            let (id, code, predicted) = match fig {
                Figure::Hamming => ("fig-hamming", hamming_7_4(), None),
                Figure::Golay3 => ("fig-golay3", golay_11(), None),
                Figure::Golay2 => ("fig-golay2", golay_23(), None),
                Figure::Parity9 => (
                    "fig-parity9",
                    parity_code(&Field::prime(2).map_err(CodeError::from)?, 8),
                    Some(ClosedForm::Parity),
                ),
                Figure::Grs15 => (
                    "fig-grs15",
                    grs_15_8(opts.seed)?,
                    Some(ClosedForm::GrsCritical),
                ),
                _ => ("fig-pi", pi_code(), None),
            };
            let mut rep = diagram_report(&code, &opts.strand)?;
            if let Some(kind) = predicted {
                rep.predicted = Some(
                    closed_form_diagram(kind, code.k())
                        .map_err(|e| ReportError::Other(e.to_string()))?,
                );
            }
            let text = render_diagram(rep.diagram.as_ref().expect("regularity 2"));
            (
                id.to_string(),
                text,
                serde_json::to_value(&rep).expect("serializable"),
            )
        }
        Figure::Alt2105 => {
            let spec = FamilySpec::new(Family::AltDual, 2, 10, 5, None, PolyMode::Irr)?;
            let table = shortened_table(&spec, 8, opts.s_min..=7, opts)?;
            (
                String::from("tab-alt-2-10-5"),
                render_shortened_table(&table),
                serde_json::to_value(&table).expect("serializable"),
            )
        }
        Figure::Goppa444 => {
            let table = goppa_444_table(&[88, 87, 86, 85, 84, 70, 69, 68, 67, 66], opts)?;
            (
                String::from("tab-goppa-4-4-4"),
                render_goppa_table(&table),
                serde_json::to_value(&table).expect("serializable"),
            )
        }
        Figure::McEliece => {
            let rows =
                mceliece_audit(&CLASSIC_MCELIECE).map_err(|e| ReportError::Other(e.to_string()))?;
            (
                String::from("tab-mceliece"),
                render_mceliece(&rows),
                serde_json::to_value(&rows).expect("serializable"),
            )
        }
        Figure::Statdef { d, d_dual } => {
            let field = Field::prime(2).map_err(CodeError::from)?;
            let t = defect_stats(
                &field,
                56,
                16,
                d,
                d_dual,
                opts.samples,
                opts.seed,
                2..=8,
                &opts.strand,
            )?;
            (
                format!("tab-statdef-{d}-{d_dual}"),
                render_defect_stats(&t),
                serde_json::to_value(&t).expect("serializable"),
            )
        }
    };
    Ok(Reproduction { id, text, payload })
}

/// Diagram layout: row `r` holds `β_{i,i+r}` in column `i`, zeros as `-`.
pub fn render_diagram(d: &BettiDiagram) -> String {
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); 3];
    let show = |v: u64| {
        if v == 0 {
            "-".to_string()
        } else {
            v.to_string()
        }
    };
    cells[0].push("1".into());
    cells[1].push("-".into());
    cells[2].push("-".into());
    for i in 1..d.k {
        cells[0].push("-".into());
        cells[1].push(show(d.row1[i - 1]));
        cells[2].push(show(d.row2[i - 1]));
    }
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    let header: Vec<String> = (0..d.k).map(|i| format!("{i:>width$}")).collect();
    let _ = writeln!(out, "   | {}", header.join(" "));
    let _ = writeln!(out, "---+{}", "-".repeat(header.join(" ").len() + 1));
    for (r, row) in cells.iter().enumerate() {
        let row: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "{r:>2} | {}", row.join(" "));
    }
    out
}

/// Modal strand of the `s`-shortened family for each `s`, up to `r* − s`.
#[derive(Clone, Debug, Serialize)]
pub struct ShortenedRow {
    pub s: usize,
    pub samples: usize,
    /// Modal `β_{r−1,r}` for `r = 2..=r*−s`.
    pub betas: Vec<u64>,
    /// Fraction of samples equal to the modal value, per entry.
    pub agreement: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShortenedTable {
    pub spec: FamilySpec,
    pub r_star: usize,
    pub rows: Vec<ShortenedRow>,
}

pub fn shortened_table(
    spec: &FamilySpec,
    r_star: usize,
    s_range: std::ops::RangeInclusive<usize>,
    opts: &ReproduceOptions,
) -> Result<ShortenedTable> {
    let emb = spec.embedding()?;
    let mut rows = Vec::new();
    for s in s_range {
        if s + 2 > r_star {
            rows.push(ShortenedRow {
                s,
                samples: opts.samples,
                betas: Vec::new(),
                agreement: Vec::new(),
            });
            continue;
        }
        let degree = r_star - s;
        let strands = (0..opts.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(opts.seed ^ ((s as u64) << 32), i as u64);
                let c = spec.sample(&emb, &mut rng)?.code;
                let positions = index::sample(&mut rng, c.n(), s).into_iter().collect();
                let cs = c.shorten(&positions).code;
                let strand = linear_strand(&cs, degree, &opts.strand);
                match strand.refusal {
                    Some(r) => Err(ReportError::Budget(r)),
                    None => Ok((2..=degree)
                        .map(|r| strand.beta(r).unwrap_or(0))
                        .collect::<Vec<u64>>()),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let (betas, agreement) = modes(&strands, degree - 1);
        rows.push(ShortenedRow {
            s,
            samples: opts.samples,
            betas,
            agreement,
        });
    }
    Ok(ShortenedTable {
        spec: spec.clone(),
        r_star,
        rows,
    })
}

/// Per-position mode (smallest among ties) and its frequency.
fn modes(samples: &[Vec<u64>], len: usize) -> (Vec<u64>, Vec<f64>) {
    (0..len)
        .map(|i| {
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for s in samples {
                *counts.entry(s[i]).or_default() += 1;
            }
            let (&v, &c) = counts
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .expect("samples");
            (v, c as f64 / samples.len() as f64)
        })
        .unzip()
}

pub fn render_shortened_table(t: &ShortenedTable) -> String {
    let mut out = String::new();
    let cols: Vec<String> = (2..=t.r_star)
        .map(|r| format!("b{},{}", r - 1, r))
        .collect();
    let _ = writeln!(
        out,
        "{:>3} | {}",
        "s",
        cols.iter()
            .map(|c| format!("{c:>6}"))
            .collect::<Vec<_>>()
            .join("")
    );
    for row in &t.rows {
        let mut cells: Vec<String> = row
            .betas
            .iter()
            .map(|b| format!("{:>6}", if *b == 0 { "-".into() } else { b.to_string() }))
            .collect();
        cells.resize(t.r_star - 1, format!("{:>6}", "-"));
        let _ = writeln!(out, "{:>3} | {}", row.s, cells.join(""));
    }
    out
}

/// One column of the `q=4, m=4, t=4` threshold table.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCell {
    pub n: usize,
    /// Modal `β_{2,3}` and `β_{3,4}` over the samples, with agreement.
    pub goppa: [u64; 2],
    pub goppa_agreement: [f64; 2],
    pub random: [u64; 2],
    pub random_agreement: [f64; 2],
    pub samples: usize,
}

/// `β_{2,3}` and `β_{3,4}` of dual Goppa codes (irreducible, `q=4, m=4,
/// t=4`) on `n` random support points versus random `[n,16]_4` codes.
pub fn goppa_444_table(lengths: &[usize], opts: &ReproduceOptions) -> Result<Vec<ThresholdCell>> {
    let field = Field::with_order(4).map_err(CodeError::from)?;
    lengths
        .iter()
        .map(|&n| {
            let spec = FamilySpec::new(Family::GoppaDual, 4, 4, 4, Some(n), PolyMode::Irr)?;
            let emb = spec.embedding()?;
            let run = |code: &LinearCode| -> Result<Vec<u64>> {
                let strand = linear_strand(code, 4, &opts.strand);
                match strand.refusal {
                    Some(r) => Err(ReportError::Budget(r)),
                    None => Ok(vec![
                        strand.beta(3).unwrap_or(0),
                        strand.beta(4).unwrap_or(0),
                    ]),
                }
            };
            let goppa = (0..opts.samples)
                .into_par_iter()
                .map(|i| {
                    run(&spec
                        .sample(
                            &emb,
                            &mut sample_rng(opts.seed ^ ((n as u64) << 32), i as u64),
                        )?
                        .code)
                })
                .collect::<Result<Vec<_>>>()?;
            let random = (0..opts.samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = sample_rng(opts.seed ^ ((n as u64) << 32) ^ (1 << 63), i as u64);
                    run(&LinearCode::random(&field, n, 16, &mut rng)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let (g, ga) = modes(&goppa, 2);
            let (r, ra) = modes(&random, 2);
            Ok(ThresholdCell {
                n,
                goppa: [g[0], g[1]],
                goppa_agreement: [ga[0], ga[1]],
                random: [r[0], r[1]],
                random_agreement: [ra[0], ra[1]],
                samples: opts.samples,
            })
        })
        .collect()
}

pub fn render_goppa_table(cells: &[ThresholdCell]) -> String {
    let mut out = String::new();
    let line = |label: &str, f: &dyn Fn(&ThresholdCell) -> u64| {
        let vals: Vec<String> = cells.iter().map(|c| format!("{:>5}", f(c))).collect();
        format!("{label:<12}|{}\n", vals.join(""))
    };
    out += &line("n", &|c| c.n as u64);
    out += &line("b2,3 goppa", &|c| c.goppa[0]);
    out += &line("b2,3 random", &|c| c.random[0]);
    out += &line("b3,4 goppa", &|c| c.goppa[1]);
    out += &line("b3,4 random", &|c| c.random[1]);
    out
}

pub fn render_mceliece(rows: &[McElieceParamSet]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<16}{:>6}{:>6}{:>14}{:>9}{:>7}{:>7}{:>10}",
        "(n,m,t)", "r*", "s", "[n_s,k_s]", "ratio", "d_GV", "d'_GV", "log2 k"
    );
    for p in rows {
        let kappa = if p.parenthesized {
            format!("({:.0})", p.log2_kappa.floor())
        } else {
            format!("{:.0}", p.log2_kappa.floor())
        };
        let _ = writeln!(
            out,
            "{:<16}{:>6}{:>6}{:>14}{:>9.2}{:>7}{:>7}{:>10}",
            format!("({},{},{})", p.n, p.m, p.t),
            p.r_star,
            p.s,
            format!("[{},{}]", p.n_s, p.k_s),
            p.conditions.ratio,
            p.conditions.d_gv,
            p.conditions.d_dual_gv,
            kappa
        );
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectRow {
    pub r: usize,
    pub mean: f64,
    /// Central 99% interval: at most 0.5% of samples fall on either side.
    pub lo: u64,
    pub hi: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectStatsTable {
    pub n: usize,
    pub k: usize,
    pub q: u32,
    pub d: usize,
    pub d_dual: usize,
    pub samples: usize,
    /// Codes drawn in total by rejection sampling.
    pub draws: u64,
    pub rows: Vec<DefectRow>,
}

/// `def(φ_r)` statistics over uniform `[n,k]_q` codes with exact `d`, `d⊥`.
#[allow(clippy::too_many_arguments)]
pub fn defect_stats(
    field: &Field,
    n: usize,
    k: usize,
    d: usize,
    d_dual: usize,
    samples: usize,
    seed: u64,
    r_range: std::ops::RangeInclusive<usize>,
    opts: &StrandOptions,
) -> Result<DefectStatsTable> {
    if samples == 0 || *r_range.start() < 2 {
        return Err(ReportError::Other("need samples ≥ 1 and r ≥ 2".into()));
    }
    let r_hi = (*r_range.end()).min(k);
    let runs = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i as u64);
            let (code, draws) = LinearCode::random_conditioned(field, n, k, d, d_dual, &mut rng)?;
            let strand = linear_strand(&code, r_hi, opts);
            if let Some(r) = strand.refusal {
                return Err(ReportError::Budget(r));
            }
            let defs: Vec<u64> = r_range
                .clone()
                .map(|r| {
                    let beta = if r <= k {
                        strand.beta(r).unwrap_or(0)
                    } else {
                        0
                    };
                    if r > k {
                        return 0;
                    }
                    defect(n, k, r, beta).max(0) as u64
                })
                .collect();
            Ok((defs, draws))
        })
        .collect::<Result<Vec<_>>>()?;
    let draws = runs.iter().map(|(_, d)| d).sum();
    let drop = samples / 200;
    let rows = r_range
        .clone()
        .enumerate()
        .map(|(j, r)| {
            let mut vals: Vec<u64> = runs.iter().map(|(v, _)| v[j]).collect();
            vals.sort_unstable();
            let mean = vals.iter().sum::<u64>() as f64 / samples as f64;
            DefectRow {
                r,
                mean,
                lo: vals[drop],
                hi: vals[samples - 1 - drop],
            }
        })
        .collect();
    Ok(DefectStatsTable {
        n,
        k,
        q: field.q(),
        d,
        d_dual,
        samples,
        draws,
        rows,
    })
}

pub fn render_defect_stats(t: &DefectStatsTable) -> String {
    let mut out = format!(
        "[{},{}]_{} codes with d = {}, d' = {} ({} samples, {} draws)\n",
        t.n, t.k, t.q, t.d, t.d_dual, t.samples, t.draws
    );
    let _ = writeln!(out, "{:>3} | {:>8} | 99%", "r", "mean");
    for row in &t.rows {
        let _ = writeln!(
            out,
            "{:>3} | {:>8.3} | [{},{}]",
            row.r, row.mean, row.lo, row.hi
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_ids_parse() {
        assert_eq!("fig-pi".parse::<Figure>().unwrap(), Figure::Pi);
        assert_eq!(
            "tab-statdef-11-3".parse::<Figure>().unwrap(),
            Figure::Statdef { d: 11, d_dual: 3 }
        );
        assert!("fig-nope".parse::<Figure>().is_err());
    }

    #[test]
    fn hamming_rendering() {
        let rep = diagram_report(&hamming_7_4(), &StrandOptions::default()).unwrap();
        let text = render_diagram(rep.diagram.as_ref().unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[2], " 0 | 1 - - -");
        assert_eq!(lines[3], " 1 | - 3 - -");
        assert_eq!(lines[4], " 2 | - 1 6 3");
    }
}
