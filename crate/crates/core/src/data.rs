//! Binary response data, item metadata and item-to-dimension partitions.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemMeta {
    /// 1-based position in the dataset.
    pub index: usize,
    pub code: String,
    #[serde(default)]
    pub description: String,
    /// 1-based questionnaire group, once a partition has been attached.
    #[serde(default)]
    pub initial_dimension: Option<usize>,
}

/// n × J matrix of 0/1 responses, row-major, with one `ItemMeta` per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    n: usize,
    items: Vec<ItemMeta>,
    values: Vec<u8>,
}

/// Optional column handling when reading a response file.
#[derive(Debug, Clone, Default)]
pub struct Schema {
    /// Header name of a subject identifier column to ignore.
    pub id_column: Option<String>,
}

impl ResponseMatrix {
    /// Build from item codes and row-major values. Every value must be 0 or 1.
    pub fn new(codes: Vec<String>, values: Vec<u8>) -> Result<Self> {
        let j = codes.len();
        if j == 0 {
            return Err(Error::Empty("no items".into()));
        }
        if values.is_empty() {
            return Err(Error::Empty("no subjects".into()));
        }
        if !values.len().is_multiple_of(j) {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not fill rows of {j} items",
                values.len()
            )));
        }
        let n = values.len() / j;
        if let Some(pos) = values.iter().position(|&v| v > 1) {
            return Err(Error::NonBinary {
                row: pos / j + 1,
                column: pos % j + 1,
                code: codes[pos % j].clone(),
                value: values[pos].to_string(),
            });
        }
        let mut seen = BTreeSet::new();
        for c in &codes {
            if !seen.insert(c.as_str()) {
                return Err(Error::DuplicateItem(c.clone()));
            }
        }
        let items = codes
            .into_iter()
            .enumerate()
            .map(|(i, code)| ItemMeta {
                index: i + 1,
                code,
                description: String::new(),
                initial_dimension: None,
            })
            .collect();
        Ok(ResponseMatrix { n, items, values })
    }

    /// Like [`ResponseMatrix::new`] with generated codes `V1..VJ`.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let j = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != j {
                return Err(Error::Ragged {
                    row: i + 1,
                    expected: j,
                    found: r.len(),
                });
            }
        }
        let codes = (1..=j).map(|i| format!("V{i}")).collect();
        Self::new(codes, rows.concat())
    }

    pub fn n_subjects(&self) -> usize {
        self.n
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[ItemMeta] {
        &self.items
    }

    pub fn codes(&self) -> Vec<&str> {
        self.items.iter().map(|m| m.code.as_str()).collect()
    }

    /// Row of subject `i` (0-based).
    pub fn row(&self, i: usize) -> &[u8] {
        let j = self.n_items();
        &self.values[i * j..(i + 1) * j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.values.chunks_exact(self.n_items())
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.values[i * self.n_items() + j]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn column_means(&self) -> Vec<f64> {
        let j = self.n_items();
        let mut sums = vec![0usize; j];
        for row in self.rows() {
            for (s, &y) in sums.iter_mut().zip(row) {
                *s += y as usize;
            }
        }
        sums.into_iter().map(|s| s as f64 / self.n as f64).collect()
    }

    /// Copy the partition's groups into the item metadata.
    pub fn with_partition(mut self, partition: &DimensionPartition) -> Result<Self> {
        partition.check_items(self.n_items())?;
        for (m, &g) in self.items.iter_mut().zip(partition.assignment()) {
            m.initial_dimension = Some(g + 1);
        }
        Ok(self)
    }

    /// Keep the columns with the given 1-based indices, in ascending order.
    /// Kept items are re-indexed 1..J' and keep their codes.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_keep(keep, self.n_items())?;
        let j = self.n_items();
        let mut values = Vec::with_capacity(self.n * keep.len());
        for i in 0..self.n {
            let row = &self.values[i * j..(i + 1) * j];
            values.extend(keep.iter().map(|&k| row[k]));
        }
        let items = keep
            .iter()
            .enumerate()
            .map(|(new, &k)| ItemMeta {
                index: new + 1,
                ..self.items[k].clone()
            })
            .collect();
        Ok(ResponseMatrix {
            n: self.n,
            items,
            values,
        })
    }

    /// FNV-1a digest of the shape and values, used to check that two fits
    /// were computed on the same data.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |b: u8| {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        };
        for b in (self.n as u64).to_le_bytes() {
            eat(b);
        }
        for b in (self.n_items() as u64).to_le_bytes() {
            eat(b);
        }
        for &v in &self.values {
            eat(v);
        }
        h
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(self.items.iter().map(|m| m.code.as_str()))?;
        for row in self.rows() {
            out.write_record(row.iter().map(|&v| if v == 1 { "1" } else { "0" }))?;
        }
        out.flush().map_err(|e| Error::io("<output>", e))?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }
}

fn normalize_keep(keep: &[usize], j: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("empty item selection".into()));
    }
    let mut set = BTreeSet::new();
    for &k in keep {
        if k == 0 || k > j {
            return Err(Error::InvalidArgument(format!(
                "item index {k} outside 1..={j}"
            )));
        }
        set.insert(k - 1);
    }
    Ok(set.into_iter().collect())
}

/// Read a response CSV: header row of item codes, one subject per row.
pub fn read_dataset<R: Read>(reader: R, schema: &Schema) -> Result<ResponseMatrix> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(h) => h?,
        None => return Err(Error::Empty("no header row".into())),
    };
    let mut keep_cols = Vec::new();
    let mut codes = Vec::new();
    for (c, name) in header.iter().enumerate() {
        if schema.id_column.as_deref() == Some(name) {
            continue;
        }
        if name.is_empty() {
            return Err(Error::InvalidArgument(format!("header column {} is blank", c + 1)));
        }
        keep_cols.push(c);
        codes.push(name.to_string());
    }
    if let Some(id) = &schema.id_column {
        if keep_cols.len() == header.len() {
            return Err(Error::InvalidArgument(format!("id column {id:?} not in header")));
        }
    }
    let width = header.len();
    let mut values = Vec::new();
    let mut row = 0;
    for rec in records {
        let rec = rec?;
        row += 1;
        if rec.len() != width {
            return Err(Error::Ragged {
                row,
                expected: width,
                found: rec.len(),
            });
        }
        for (k, &c) in keep_cols.iter().enumerate() {
            let cell = &rec[c];
            let v = match cell {
                "0" => 0,
                "1" => 1,
                _ => {
                    return Err(Error::NonBinary {
                        row,
                        column: c + 1,
                        code: codes[k].clone(),
                        value: cell.to_string(),
                    })
                }
            };
            values.push(v);
        }
    }
    if row == 0 {
        return Err(Error::Empty("no subject rows".into()));
    }
    ResponseMatrix::new(codes, values)
}

pub fn load_dataset(path: impl AsRef<Path>, schema: &Schema) -> Result<ResponseMatrix> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(std::io::BufReader::new(f), schema)
}

/// Assignment of every item to one of `s` groups. Groups are 0-based here;
/// file formats and reports use 1-based group labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DimensionPartition {
    assignment: Vec<usize>,
    n_groups: usize,
}

impl TryFrom<Vec<usize>> for DimensionPartition {
    type Error = Error;

    /// From 1-based group labels.
    fn try_from(labels: Vec<usize>) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::InvalidArgument("group labels are 1-based".into()));
        }
        DimensionPartition::new(labels.into_iter().map(|g| g - 1).collect())
    }
}

impl From<DimensionPartition> for Vec<usize> {
    fn from(p: DimensionPartition) -> Self {
        p.assignment.into_iter().map(|g| g + 1).collect()
    }
}

impl DimensionPartition {
    /// `assignment[j]` is the 0-based group of item j. Groups must be
    /// 0..s with none empty.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::Empty("partition with no items".into()));
        }
        let n_groups = assignment.iter().max().unwrap() + 1;
        let mut sizes = vec![0usize; n_groups];
        for &g in &assignment {
            sizes[g] += 1;
        }
        if let Some(g) = sizes.iter().position(|&c| c == 0) {
            return Err(Error::EmptyGroup(g + 1));
        }
        Ok(DimensionPartition {
            assignment,
            n_groups,
        })
    }

    pub fn unidimensional(n_items: usize) -> Self {
        DimensionPartition {
            assignment: vec![0; n_items],
            n_groups: 1,
        }
    }

    pub fn n_groups(&self) -> usize {
        self.n_groups
    }

    pub fn n_items(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn group_of(&self, item: usize) -> usize {
        self.assignment[item]
    }

    /// Items (0-based, ascending) in group `g`.
    pub fn members(&self, g: usize) -> Vec<usize> {
        (0..self.n_items()).filter(|&j| self.assignment[j] == g).collect()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_groups];
        for &g in &self.assignment {
            sizes[g] += 1;
        }
        sizes
    }

    /// Lowest-index item of every group.
    pub fn anchors(&self) -> Vec<usize> {
        let mut anchors = vec![usize::MAX; self.n_groups];
        for (j, &g) in self.assignment.iter().enumerate() {
            if anchors[g] == usize::MAX {
                anchors[g] = j;
            }
        }
        anchors
    }

    pub fn is_anchor(&self, item: usize) -> bool {
        let g = self.assignment[item];
        self.assignment[..item].iter().all(|&h| h != g)
    }

    /// δ matrix: `delta[j][d] = 1` iff item j belongs to group d.
    pub fn to_delta(&self) -> Vec<Vec<u8>> {
        self.assignment
            .iter()
            .map(|&g| (0..self.n_groups).map(|d| (d == g) as u8).collect())
            .collect()
    }

    pub fn from_delta(delta: &[Vec<u8>]) -> Result<Self> {
        let mut assignment = Vec::with_capacity(delta.len());
        for (j, row) in delta.iter().enumerate() {
            let ones: Vec<usize> = row
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == 1)
                .map(|(d, _)| d)
                .collect();
            if ones.len() != 1 || row.iter().any(|&v| v > 1) {
                return Err(Error::InvalidArgument(format!(
                    "delta row {} must contain exactly one 1",
                    j + 1
                )));
            }
            assignment.push(ones[0]);
        }
        let width = delta.first().map_or(0, Vec::len);
        let p = Self::new(assignment)?;
        if p.n_groups != width {
            return Err(Error::EmptyGroup(p.n_groups + 1));
        }
        Ok(p)
    }

    /// Merge groups `a` and `b` (0-based). The merged group takes the
    /// position of the smaller label; later groups shift down by one.
    pub fn merge(&self, a: usize, b: usize) -> Result<Self> {
        if a == b || a >= self.n_groups || b >= self.n_groups {
            return Err(Error::InvalidArgument(format!(
                "cannot merge groups {} and {} of {}",
                a + 1,
                b + 1,
                self.n_groups
            )));
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let assignment = self
            .assignment
            .iter()
            .map(|&g| match g.cmp(&hi) {
                std::cmp::Ordering::Equal => lo,
                std::cmp::Ordering::Greater => g - 1,
                std::cmp::Ordering::Less => g,
            })
            .collect();
        Self::new(assignment)
    }

    /// If `reduced` equals `self` with exactly two groups merged, return
    /// that pair (0-based, ascending).
    pub fn merged_pair(&self, reduced: &DimensionPartition) -> Option<(usize, usize)> {
        if reduced.n_items() != self.n_items() || reduced.n_groups + 1 != self.n_groups {
            return None;
        }
        for a in 0..self.n_groups {
            for b in a + 1..self.n_groups {
                if self.merge(a, b).ok().as_ref() == Some(reduced) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Restrict to the given 1-based items; every group must keep an item.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let keep = normalize_keep(keep, self.n_items())?;
        let assignment: Vec<usize> = keep.iter().map(|&k| self.assignment[k]).collect();
        let present: BTreeSet<usize> = assignment.iter().copied().collect();
        if let Some(g) = (0..self.n_groups).find(|g| !present.contains(g)) {
            return Err(Error::EmptyGroup(g + 1));
        }
        Self::new(assignment)
    }

    pub(crate) fn check_items(&self, n_items: usize) -> Result<()> {
        if self.n_items() != n_items {
            return Err(Error::DimensionMismatch(format!(
                "partition covers {} items, data has {n_items}",
                self.n_items()
            )));
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, items: &[ItemMeta], w: W) -> Result<()> {
        self.check_items(items.len())?;
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(["item_code", "group_index"])?;
        for (m, &g) in items.iter().zip(&self.assignment) {
            out.write_record([m.code.clone(), (g + 1).to_string()])?;
        }
        out.flush().map_err(|e| Error::io("<output>", e))?;
        Ok(())
    }
}

/// Read a two-column `item_code,group_index` CSV (header row optional)
/// against the dataset's items.
pub fn read_partition<R: Read>(reader: R, items: &[ItemMeta]) -> Result<DimensionPartition> {
    let index: HashMap<&str, usize> = items
        .iter()
        .enumerate()
        .map(|(j, m)| (m.code.as_str(), j))
        .collect();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut groups: Vec<Option<usize>> = vec![None; items.len()];
    let mut first = true;
    for (i, rec) in rdr.records().enumerate() {
        let (rec, row) = (rec?, i + 1);
        if rec.len() != 2 {
            return Err(Error::Ragged {
                row,
                expected: 2,
                found: rec.len(),
            });
        }
        let (code, label) = (&rec[0], &rec[1]);
        if first && label.parse::<usize>().is_err() && !index.contains_key(code) {
            first = false;
            continue;
        }
        first = false;
        let j = *index
            .get(code)
            .ok_or_else(|| Error::UnknownItem(code.to_string()))?;
        let g = label
            .parse::<usize>()
            .ok()
            .filter(|&g| g >= 1)
            .ok_or_else(|| Error::BadGroup {
                code: code.to_string(),
                value: label.to_string(),
            })?;
        if groups[j].replace(g - 1).is_some() {
            return Err(Error::DuplicateAssignment(code.to_string()));
        }
    }
    let mut assignment = Vec::with_capacity(items.len());
    for (m, g) in items.iter().zip(groups) {
        assignment.push(g.ok_or_else(|| Error::MissingAssignment(m.code.clone()))?);
    }
    DimensionPartition::new(assignment)
}

pub fn load_partition(path: impl AsRef<Path>, items: &[ItemMeta]) -> Result<DimensionPartition> {
    let path = path.as_ref();
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_partition(std::io::BufReader::new(f), items)
}
