//! CSV and JSON renderings of the analysis results.

use std::io::Write;

use serde::Serialize;

use crate::data::{DimensionPartition, ItemMeta};
use crate::dimensionality::DendrogramPath;
use crate::error::Result;
use crate::lc::BicRow;
use crate::selection::{DiscriminantReport, Retention};
use crate::twopl::{AbilityCorrelations, TwoPlFit};

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), f)
}

/// Columns k, loglik, m, bic.
pub fn write_bic_table<W: Write>(rows: &[BicRow], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["k", "loglik", "m", "bic"])?;
    for r in rows {
        out.write_record([r.k.to_string(), f(r.loglik), r.n_params.to_string(), f(r.bic)])?;
    }
    out.flush().map_err(|e| crate::error::Error::io("<bic table>", e))?;
    Ok(())
}

/// LC report: j, item, d, mean, std, M_j, D_j.
/// 2PL report: d, j, item, gamma, beta, D_star.
pub fn write_discriminant<W: Write>(report: &DiscriminantReport, w: W) -> Result<()> {
    use crate::selection::ReportSource;
    let mut out = writer(w);
    match report.source {
        ReportSource::Lc => {
            out.write_record(["j", "item", "d", "mean", "std", "M_j", "D_j"])?;
            for i in &report.items {
                out.write_record([
                    i.index.to_string(),
                    i.code.clone(),
                    i.dimension.to_string(),
                    opt(i.weighted_mean),
                    opt(i.weighted_std),
                    f(i.raw),
                    f(i.relative),
                ])?;
            }
        }
        ReportSource::TwoPl => {
            out.write_record(["d", "j", "item", "gamma", "beta", "D_star"])?;
            let mut items: Vec<_> = report.items.iter().collect();
            items.sort_by_key(|i| (i.dimension, i.index));
            for i in items {
                out.write_record([
                    i.dimension.to_string(),
                    i.index.to_string(),
                    i.code.clone(),
                    f(i.raw),
                    opt(i.difficulty),
                    f(i.relative),
                ])?;
            }
        }
    }
    out.flush().map_err(|e| crate::error::Error::io("<discriminant>", e))?;
    Ok(())
}

/// One row per threshold: t, count per dimension, total.
pub fn write_sweep<W: Write>(sweep: &[Retention], w: W) -> Result<()> {
    let mut out = writer(w);
    let s = sweep.first().map_or(0, |r| r.counts.len());
    let mut header = vec!["threshold".to_string()];
    header.extend((1..=s).map(|d| format!("d{d}")));
    header.push("total".into());
    out.write_record(&header)?;
    for r in sweep {
        let mut row = vec![format!("{:.2}", r.threshold)];
        row.extend(r.counts.iter().map(usize::to_string));
        row.push(r.total().to_string());
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| crate::error::Error::io("<sweep>", e))?;
    Ok(())
}

fn clusters_label(clusters: &[Vec<usize>]) -> String {
    clusters
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Columns h, s, clusters, LR, p_value; row h = 0 is the initial grouping.
pub fn write_path<W: Write>(path: &DendrogramPath, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["h", "s", "clusters", "LR", "p_value"])?;
    out.write_record([
        "0".to_string(),
        path.n_initial_groups().to_string(),
        clusters_label(&path.initial_clusters()),
        String::new(),
        String::new(),
    ])?;
    for s in &path.steps {
        out.write_record([
            s.h.to_string(),
            s.s.to_string(),
            clusters_label(&s.clusters),
            format!("{:.3}", s.lr),
            format!("{:.3}", s.p_value),
        ])?;
    }
    out.flush().map_err(|e| crate::error::Error::io("<path>", e))?;
    Ok(())
}

/// Columns class, weight, theta_1..theta_s.
pub fn write_abilities<W: Write>(fit: &TwoPlFit, w: W) -> Result<()> {
    let mut out = writer(w);
    let s = fit.params.n_dimensions();
    let mut header = vec!["class".to_string(), "weight".to_string()];
    header.extend((1..=s).map(|d| format!("theta_{d}")));
    out.write_record(&header)?;
    for (c, (row, w)) in fit.params.abilities.iter().zip(&fit.params.weights).enumerate() {
        let mut rec = vec![(c + 1).to_string(), f(*w)];
        rec.extend(row.iter().map(|&t| f(t)));
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| crate::error::Error::io("<abilities>", e))?;
    Ok(())
}

/// Lower triangle: row d lists ρ_{d,1..d}; undefined entries are "NA".
pub fn write_correlations<W: Write>(corr: &AbilityCorrelations, w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .flexible(true)
        .from_writer(w);
    let s = corr.values.len();
    let mut header = vec!["d".to_string()];
    header.extend((1..=s).map(|d| d.to_string()));
    out.write_record(&header)?;
    for (d, row) in corr.values.iter().enumerate() {
        let mut rec = vec![(d + 1).to_string()];
        rec.extend(row[..=d].iter().map(|v| v.map_or_else(|| "NA".into(), |x| format!("{x:.3}"))));
        out.write_record(&rec)?;
    }
    out.flush().map_err(|e| crate::error::Error::io("<correlations>", e))?;
    Ok(())
}

/// Retained items in the partition CSV format, so the list can be loaded
/// back as a partition of the restricted data.
pub fn write_selected_items<W: Write>(
    items: &[ItemMeta],
    partition: &DimensionPartition,
    retained: &[usize],
    w: W,
) -> Result<()> {
    let kept: Vec<ItemMeta> = retained.iter().map(|&j| items[j - 1].clone()).collect();
    partition.restrict(retained)?.write_csv(&kept, w)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
