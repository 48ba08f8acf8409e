//! `curves` (closed-form bifurcation curves) and `continue` (numerical
//! continuation runs).
//!
//! `curves` CSV columns: `k,F` (`sn` adds a `branch` column, `disc` may
//! list several `F` per `k`).
//!
//! `continue` CSV columns: `k,F`, then the auxiliary unknowns of the curve
//! (`u,v` for equilibrium curves; `s,period,multiplier` for cycle curves;
//! `F_lo,F_hi,gap_lo,gap_hi` for homoclinic brackets), then the unit
//! tangent components `t0,t1,...`, then `flags` (special-point tag).

use anyhow::{bail, Result};
use gskit::continuation::homoclinic::homoclinic_curve;
use gskit::continuation::lpc::{lpc_curve, lpc_settings, wedge_point};
use gskit::continuation::{fold_curve, hopf_curve, Aux, Branch, ContinuationSettings, CurvePoint, SpecialKind};
use gskit::equilibria::{disc_curve_f, hopf_f, neutral_saddle_f, saddle_node_f};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Sn,
    Hopf,
    Neutral,
    Disc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CurveKind {
    Hopf,
    Fold,
    Lpc,
    Homoclinic,
}

/// Abscissae `a + (b-a) i/(n-1)`; a zero left end is nudged inside the domain.
fn abscissae(range: (f64, f64), n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .map(|k| if k <= 0.0 { 1e-9 } else { k })
        .collect()
}

pub fn closed_form(which: Which, range: (f64, f64), n: usize) -> Result<String> {
    let mut out = String::from(if which == Which::Sn { "k,F,branch\n" } else { "k,F\n" });
    for k in abscissae(range, n) {
        match which {
            Which::Sn => {
                let (up, lo) = saddle_node_f(k)?;
                out.push_str(&format!("{k:.12e},{up:.12e},upper\n{k:.12e},{lo:.12e},lower\n"));
            }
            Which::Hopf => out.push_str(&format!("{k:.12e},{:.12e}\n", hopf_f(k)?)),
            Which::Neutral => out.push_str(&format!("{k:.12e},{:.12e}\n", neutral_saddle_f(k)?)),
            Which::Disc => {
                for f in disc_curve_f(k)? {
                    out.push_str(&format!("{k:.12e},{f:.12e}\n"));
                }
            }
        }
    }
    Ok(out)
}

/// Options of a continuation run.
#[derive(Debug, Clone)]
pub struct ContinueOptions {
    pub kind: CurveKind,
    /// Starting abscissa (equilibrium curves and LPC seed).
    pub k: Option<f64>,
    /// Abscissa range of homoclinic brackets.
    pub k_range: Option<(f64, f64)>,
    pub n: usize,
    /// Keep the neutral-saddle continuation of the Hopf curve past BT.
    pub past_bt: bool,
    pub newton_tol: f64,
}

/// One output row.
#[derive(Debug, Clone)]
pub struct Row {
    pub k: f64,
    pub f: f64,
    pub aux: Vec<f64>,
    pub tangent: Vec<f64>,
    pub flag: String,
}

#[derive(Debug, Clone)]
pub struct Polyline {
    pub kind: CurveKind,
    pub aux_names: Vec<&'static str>,
    pub rows: Vec<Row>,
    pub notes: Vec<String>,
}

fn row(p: &CurvePoint) -> Row {
    let aux = match p.aux {
        Aux::Equilibrium(s) => vec![s.u, s.v],
        Aux::Cycle(c) => vec![c.amplitude, c.period, c.nontrivial_multiplier],
        Aux::Homoclinic { bracket } => vec![bracket],
    };
    Row { k: p.params.k, f: p.params.f, aux, tangent: p.tangent.clone(), flag: p.label.map(|l| l.tag().to_string()).unwrap_or_default() }
}

/// Rows of a branch with its located special points spliced in between
/// the two consecutive points they fall between.
fn branch_rows(b: &Branch) -> Vec<Row> {
    let mut rows: Vec<Row> = b.points.iter().map(row).collect();
    for sp in &b.special {
        let r = row(&sp.point);
        let d = |x: &Row, y: &Row| (x.k - y.k).hypot(x.f - y.f);
        let at = (0..rows.len().saturating_sub(1))
            .min_by(|&i, &j| {
                let ci = d(&rows[i], &r) + d(&r, &rows[i + 1]) - d(&rows[i], &rows[i + 1]);
                let cj = d(&rows[j], &r) + d(&r, &rows[j + 1]) - d(&rows[j], &rows[j + 1]);
                ci.total_cmp(&cj)
            })
            .map(|i| i + 1)
            .unwrap_or(rows.len());
        rows.insert(at, r);
    }
    rows
}

/// Join a backward and a forward run from the same seed into one polyline
/// ordered along the backward run reversed.
fn join(back: &Branch, fwd: &Branch) -> Vec<Row> {
    let mut rows: Vec<Row> = branch_rows(back).into_iter().rev().collect();
    rows.extend(branch_rows(fwd).into_iter().skip(1));
    rows
}

/// Drop the part of a Hopf run beyond BT (where it follows the neutral
/// saddle), ending the polyline at the BT point itself.
fn truncate_at_bt(rows: Vec<Row>) -> Vec<Row> {
    let mut out = Vec::new();
    for r in rows {
        let done = r.flag == SpecialKind::BogdanovTakens.tag();
        out.push(r);
        if done {
            break;
        }
    }
    out
}

pub fn run(o: &ContinueOptions) -> Result<Polyline> {
    let settings = ContinuationSettings { corrector_tol: o.newton_tol, ..ContinuationSettings::default() };
    let back = ContinuationSettings { direction: -settings.direction, ..settings };
    let mut notes = Vec::new();
    let (aux_names, rows) = match o.kind {
        CurveKind::Hopf | CurveKind::Fold => {
            let k = o.k.unwrap_or(0.03);
            let (b, f) = if o.kind == CurveKind::Hopf { (hopf_curve(k, &back)?, hopf_curve(k, &settings)?) } else { (fold_curve(k, &back)?, fold_curve(k, &settings)?) };
            notes.push(format!("backward run: {:?}; forward run: {:?}", b.termination, f.termination));
            let mut rows = join(&b, &f);
            // Orient from the k -> 0 end towards BT; a Hopf run reaching BT
            // continues along the neutral saddle back towards k -> 0, so the
            // position of BT, not the abscissa, decides the orientation.
            let bt = rows.iter().position(|r| r.flag == SpecialKind::BogdanovTakens.tag());
            let flip = match bt {
                Some(i) => i < b.points.len(),
                None => rows.first().map(|r| r.k > rows.last().unwrap().k).unwrap_or(false),
            };
            if flip {
                rows.reverse();
            }
            if o.kind == CurveKind::Hopf && !o.past_bt {
                rows = truncate_at_bt(rows);
            }
            (vec!["u", "v"], rows)
        }
        CurveKind::Lpc => {
            let k = o.k.unwrap_or(0.032);
            let br = lpc_curve(wedge_point(k)?, &lpc_settings())?;
            notes.push(format!("run: {:?}", br.termination));
            (vec!["s", "period", "multiplier"], branch_rows(&br))
        }
        CurveKind::Homoclinic => {
            let range = o.k_range.unwrap_or((0.058, 0.0624));
            let (pts, err) = homoclinic_curve(&abscissae(range, o.n));
            if let Some(e) = err {
                notes.push(format!("stopped: {e}"));
            }
            if pts.is_empty() {
                bail!("no homoclinic bracket found in k range {range:?}");
            }
            let rows = pts.iter().map(|p| Row { k: p.k, f: p.f, aux: vec![p.f_lo, p.f_hi, p.gap_lo, p.gap_hi], tangent: vec![], flag: String::new() }).collect();
            (vec!["F_lo", "F_hi", "gap_lo", "gap_hi"], rows)
        }
    };
    Ok(Polyline { kind: o.kind, aux_names, rows, notes })
}

impl Polyline {
    fn tangent_len(&self) -> usize {
        self.rows.iter().map(|r| r.tangent.len()).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let nt = self.tangent_len();
        let mut header = vec!["k".to_string(), "F".to_string()];
        header.extend(self.aux_names.iter().map(|s| s.to_string()));
        header.extend((0..nt).map(|i| format!("t{i}")));
        header.push("flags".into());
        let mut s = header.join(",") + "\n";
        for r in &self.rows {
            let mut cells = vec![format!("{:.15e}", r.k), format!("{:.15e}", r.f)];
            cells.extend(r.aux.iter().map(|x| format!("{x:.15e}")));
            cells.extend((0..nt).map(|i| r.tangent.get(i).map(|x| format!("{x:.15e}")).unwrap_or_default()));
            cells.push(r.flag.clone());
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            CurveKind::Hopf => "hopf",
            CurveKind::Fold => "fold",
            CurveKind::Lpc => "lpc",
            CurveKind::Homoclinic => "homoclinic",
        };
        json!({
            "schema": 1,
            "curve": kind,
            "aux_names": self.aux_names,
            "notes": self.notes,
            "points": self.rows.iter().map(|r| json!({ "k": r.k, "F": r.f, "aux": r.aux, "tangent": r.tangent, "flag": r.flag })).collect::<Vec<_>>(),
        })
    }
}
