use std::fmt::Write as _;
use std::str::FromStr;

use super::{Cluster, DendrogramPath};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DendrogramFormat {
    Text,
    Dot,
}

impl FromStr for DendrogramFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Self::Text),
            "dot" => Ok(Self::Dot),
            other => Err(Error::InvalidArgument(format!(
                "unknown dendrogram format {other:?} (expected text or dot)"
            ))),
        }
    }
}

fn fmt_cluster(c: &[usize]) -> String {
    let inner: Vec<String> = c.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn union(a: &[usize], b: &[usize]) -> Cluster {
    let mut u = [a, b].concat();
    u.sort_unstable();
    u
}

/// Merge heights: cumulative LR, with negative statistics counted as 0 so
/// heights never decrease.
fn heights(path: &DendrogramPath) -> Vec<f64> {
    path.steps
        .iter()
        .scan(0.0, |acc, s| {
            *acc += s.lr.max(0.0);
            Some(*acc)
        })
        .collect()
}

/// Step (0-based) at which a cluster was formed, if it is not a leaf.
fn formed_at(path: &DendrogramPath, cluster: &[usize]) -> Option<usize> {
    path.steps
        .iter()
        .position(|s| union(&s.merged.0, &s.merged.1) == cluster)
}

pub fn emit_dendrogram(path: &DendrogramPath, format: DendrogramFormat) -> Result<String> {
    if path.steps.is_empty() {
        return Err(Error::InvalidArgument("dendrogram path has no merges".into()));
    }
    Ok(match format {
        DendrogramFormat::Text => emit_text(path),
        DendrogramFormat::Dot => emit_dot(path),
    })
}

fn emit_text(path: &DendrogramPath) -> String {
    let hs = heights(path);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dendrogram leaves={} k={} alpha={}",
        path.n_initial_groups(),
        path.k,
        path.alpha
    );
    for (step, h) in path.steps.iter().zip(&hs) {
        let _ = writeln!(
            out,
            "step {}: s={} merge {} + {} -> {} lr={} p={} height={}",
            step.h,
            step.s,
            fmt_cluster(&step.merged.0),
            fmt_cluster(&step.merged.1),
            fmt_cluster(&union(&step.merged.0, &step.merged.1)),
            step.lr,
            step.p_value,
            h
        );
    }
    let _ = writeln!(
        out,
        "selected: s={} after {} merges",
        path.n_initial_groups() - path.accepted,
        path.accepted
    );
    out.push_str("tree:\n");
    let root = path.steps.last().unwrap();
    tree_lines(path, &hs, &union(&root.merged.0, &root.merged.1), 0, &mut out);
    out
}

fn tree_lines(path: &DendrogramPath, hs: &[f64], cluster: &[usize], depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    match formed_at(path, cluster) {
        None => {
            let _ = writeln!(out, "{indent}{}", fmt_cluster(cluster));
        }
        Some(i) => {
            let _ = writeln!(out, "{indent}{} height={:.3}", fmt_cluster(cluster), hs[i]);
            let step = &path.steps[i];
            tree_lines(path, hs, &step.merged.0, depth + 1, out);
            tree_lines(path, hs, &step.merged.1, depth + 1, out);
        }
    }
}

fn emit_dot(path: &DendrogramPath) -> String {
    let hs = heights(path);
    let mut out = String::from("digraph dendrogram {\n  rankdir=BT;\n  node [shape=box];\n");
    for g in 1..=path.n_initial_groups() {
        let _ = writeln!(out, "  g{g} [label=\"{g}\"];");
    }
    let node = |c: &[usize]| match formed_at(path, c) {
        Some(i) => format!("m{}", path.steps[i].h),
        None => format!("g{}", c[0]),
    };
    for (step, h) in path.steps.iter().zip(&hs) {
        let style = if step.h <= path.accepted { "solid" } else { "dashed" };
        let _ = writeln!(
            out,
            "  m{} [shape=ellipse, style={style}, label=\"h={}\\nLR={:.3}\\np={:.3}\", height_lr={}];",
            step.h, step.h, step.lr, step.p_value, h
        );
        let _ = writeln!(out, "  {} -> m{};", node(&step.merged.0), step.h);
        let _ = writeln!(out, "  {} -> m{};", node(&step.merged.1), step.h);
    }
    out.push_str("}\n");
    out
}

/// One merge as recovered from the text rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedMerge {
    pub h: usize,
    pub s: usize,
    pub merged: (Cluster, Cluster),
    pub lr: f64,
    pub p_value: f64,
}

fn parse_cluster(s: &str) -> Result<Cluster> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidArgument(format!("malformed cluster {s:?}")))?;
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("malformed cluster {s:?}")))
        })
        .collect()
}

fn field<'a>(tok: Option<&'a str>, key: &str, line: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::InvalidArgument(format!("malformed step line {line:?}")))
}

fn num<T: FromStr>(s: &str, line: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::InvalidArgument(format!("malformed number in {line:?}")))
}

/// Recover the merge sequence from `emit_dendrogram(.., Text)` output.
pub fn parse_dendrogram_text(text: &str) -> Result<Vec<ParsedMerge>> {
    let mut merges = Vec::new();
    for line in text.lines().filter(|l| l.starts_with("step ")) {
        let bad = || Error::InvalidArgument(format!("malformed step line {line:?}"));
        let mut t = line.split_whitespace().skip(1);
        let h = num(t.next().and_then(|x| x.strip_suffix(':')).ok_or_else(bad)?, line)?;
        let s = num(field(t.next(), "s=", line)?, line)?;
        if t.next() != Some("merge") {
            return Err(bad());
        }
        let a = parse_cluster(t.next().ok_or_else(bad)?)?;
        if t.next() != Some("+") {
            return Err(bad());
        }
        let b = parse_cluster(t.next().ok_or_else(bad)?)?;
        let _arrow = t.next();
        let _union = t.next();
        let lr = num(field(t.next(), "lr=", line)?, line)?;
        let p_value = num(field(t.next(), "p=", line)?, line)?;
        merges.push(ParsedMerge {
            h,
            s,
            merged: (a, b),
            lr,
            p_value,
        });
    }
    if merges.is_empty() {
        return Err(Error::Empty("no merge steps in dendrogram text".into()));
    }
    Ok(merges)
}

#[cfg(test)]
mod tests {
    use super::super::MergeStep;
    use super::*;
    use crate::data::DimensionPartition;

    fn path(merges: &[(Cluster, Cluster, f64, f64)], leaves: usize) -> DendrogramPath {
        let mut clusters: Vec<Cluster> = (1..=leaves).map(|g| vec![g]).collect();
        let mut steps = Vec::new();
        for (h, (a, b, lr, p)) in merges.iter().enumerate() {
            let ia = clusters.iter().position(|c| c == a).unwrap();
            let ib = clusters.iter().position(|c| c == b).unwrap();
            let (lo, hi) = (ia.min(ib), ia.max(ib));
            clusters[lo] = union(a, b);
            clusters.remove(hi);
            steps.push(MergeStep {
                h: h + 1,
                s: clusters.len(),
                merged: (a.clone(), b.clone()),
                clusters: clusters.clone(),
                lr: *lr,
                df: 4,
                p_value: *p,
                loglik: 0.0,
                nesting_violated: false,
            });
        }
        DendrogramPath {
            initial_partition: DimensionPartition::new((0..leaves).collect()).unwrap(),
            initial_loglik: 0.0,
            k: 6,
            alpha: 0.05,
            accepted: super::super::accepted_merges(&steps, 0.05),
            steps,
        }
    }

    #[test]
    fn two_steps_give_three_leaves_and_two_nodes() {
        let p = path(&[(vec![1], vec![2], 1.0, 0.9), (vec![1, 2], vec![3], 30.0, 0.0)], 3);
        let dot = emit_dendrogram(&p, DendrogramFormat::Dot).unwrap();
        assert_eq!(dot.matches(" [label=\"").count(), 3);
        assert_eq!(dot.matches("[shape=ellipse").count(), 2);
        assert_eq!(dot.matches(" -> ").count(), 4);
        let text = emit_dendrogram(&p, DendrogramFormat::Text).unwrap();
        let tree = text.split("tree:\n").nth(1).unwrap();
        assert_eq!(tree.lines().count(), 5);
        assert!(tree.starts_with("{1,2,3} height=31.000"));
    }

    #[test]
    fn text_round_trip() {
        let p = path(
            &[
                (vec![1], vec![3], 0.123456789, 0.99),
                (vec![2], vec![4], 2.5, 0.3),
                (vec![1, 3], vec![2, 4], 40.0, 1e-7),
            ],
            4,
        );
        let text = emit_dendrogram(&p, DendrogramFormat::Text).unwrap();
        let parsed = parse_dendrogram_text(&text).unwrap();
        assert_eq!(parsed.len(), 3);
        for (m, s) in parsed.iter().zip(&p.steps) {
            assert_eq!((m.h, m.s, &m.merged, m.lr, m.p_value), (s.h, s.s, &s.merged, s.lr, s.p_value));
        }
    }

    #[test]
    fn formats() {
        assert_eq!("dot".parse::<DendrogramFormat>().unwrap(), DendrogramFormat::Dot);
        assert_eq!("TEXT".parse::<DendrogramFormat>().unwrap(), DendrogramFormat::Text);
        assert!("svg".parse::<DendrogramFormat>().is_err());
        let empty = path(&[], 2);
        assert!(emit_dendrogram(&empty, DendrogramFormat::Text).is_err());
        assert!(parse_dendrogram_text("nothing here").is_err());
    }
}
