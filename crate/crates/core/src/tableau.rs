use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::signature::Signature;
use crate::term::{render_polish, Term};

/// One substitution line: generator `op` applied at variable place `place`
/// (1-based) of every parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableauLine {
    pub place: usize,
    pub op: usize,
}

/// The substitution tableau of order `n`.
///
/// Columns are the distinct order-`n-1` iterates in canonical label order;
/// lines run place-major, operations in signature order inside each place.
/// Cell `(line, column)` holds the parent with the line's generator
/// substituted at the line's place, or nothing when the parent has fewer
/// places (possible only for mixed arities).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    sig: Signature,
    order: usize,
    columns: Vec<Term>,
    lines: Vec<TableauLine>,
    cells: Vec<Vec<Option<Term>>>,
}

/// Bijection between the distinct cells of a tableau and labels `1..=D_n`,
/// assigned by scanning lines top to bottom, each line left to right, and
/// numbering first occurrences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl LabelMap {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// 1-based label of a term, if it occurs in the tableau.
    pub fn label_of(&self, term: &Term) -> Option<usize> {
        self.index.get(term).map(|i| i + 1)
    }

    /// Term carrying the given 1-based label.
    pub fn term_of(&self, label: usize) -> &Term {
        &self.terms[label - 1]
    }

    /// All labeled terms, index 0 holding label 1.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

/// Multiplicities `M(J)` (cells equal to `J`) and the histogram
/// `k -> T_{nk}` (number of labels with multiplicity `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityTable {
    per_label: Vec<u64>,
    histogram: BTreeMap<u64, u64>,
}

impl MultiplicityTable {
    /// Multiplicity of the 1-based label.
    pub fn multiplicity(&self, label: usize) -> u64 {
        self.per_label[label - 1]
    }

    pub fn per_label(&self) -> &[u64] {
        &self.per_label
    }

    pub fn histogram(&self) -> &BTreeMap<u64, u64> {
        &self.histogram
    }
}

/// Grid dimensions and occupancy counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableauStats {
    pub lines: usize,
    pub columns: usize,
    pub present_cells: u64,
    pub distinct: u64,
}

impl Tableau {
    /// Builds `T_order` by building every tableau below it: the columns of
    /// `T_m` are the labeled distinct cells of `T_{m-1}`, and `T_1` hangs the
    /// generators off the single parent `x`.
    pub fn build(sig: &Signature, order: usize, limits: &Limits) -> Result<Tableau> {
        if order < 1 {
            return Err(Error::OrderTooSmall { min: 1, got: order });
        }
        if let Some(op) = sig.ops().iter().find(|op| op.arity < 2) {
            return Err(Error::TableauNeedsArityTwo {
                symbol: op.symbol,
                arity: op.arity,
            });
        }

        let mut columns = vec![Term::Variable];
        let mut tableau = None;
        for m in 1..=order {
            let level = Self::build_level(sig, m, columns, limits)?;
            columns = level.canonical_labels().terms.clone();
            tableau = Some(level);
        }
        Ok(tableau.expect("order >= 1 built at least one level"))
    }

    fn build_level(
        sig: &Signature,
        order: usize,
        columns: Vec<Term>,
        limits: &Limits,
    ) -> Result<Tableau> {
        let places: Vec<usize> = columns
            .iter()
            .map(|t| t.variable_places().expect("tableau terms are constant-free"))
            .collect();
        let max_places = *places.iter().max().expect("at least one column");

        let line_count = max_places * sig.len();
        let grid = BigUint::from(line_count) * BigUint::from(columns.len());
        if grid > BigUint::from(limits.max_cells) {
            return Err(Error::ResourceCap {
                predicted: grid,
                cap: limits.max_cells,
            });
        }

        let mut lines = Vec::with_capacity(line_count);
        let mut cells = Vec::with_capacity(line_count);
        for place in 1..=max_places {
            for op in 0..sig.len() {
                lines.push(TableauLine { place, op });
                let row: Vec<Option<Term>> = columns
                    .iter()
                    .zip(&places)
                    .map(|(parent, &parent_places)| {
                        if place <= parent_places {
                            Some(
                                parent
                                    .substitute_at_place(place, op, sig)
                                    .expect("place checked against parent"),
                            )
                        } else {
                            None
                        }
                    })
                    .collect();
                cells.push(row);
            }
        }

        Ok(Tableau {
            sig: sig.clone(),
            order,
            columns,
            lines,
            cells,
        })
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn columns(&self) -> &[Term] {
        &self.columns
    }

    pub fn lines(&self) -> &[TableauLine] {
        &self.lines
    }

    pub fn cell(&self, line: usize, column: usize) -> Option<&Term> {
        self.cells[line][column].as_ref()
    }

    pub fn rows(&self) -> &[Vec<Option<Term>>] {
        &self.cells
    }

    /// Labels the distinct cells 1..=D_n in scan order (lines top to bottom,
    /// left to right within a line).
    pub fn canonical_labels(&self) -> LabelMap {
        let mut terms = Vec::new();
        let mut index = HashMap::new();
        for row in &self.cells {
            for term in row.iter().flatten() {
                if !index.contains_key(term) {
                    index.insert(term.clone(), terms.len());
                    terms.push(term.clone());
                }
            }
        }
        LabelMap { terms, index }
    }

    /// Counts how often each labeled iterate occurs in the tableau and
    /// aggregates the counts into the multiplicity histogram.
    pub fn multiplicity_table(&self, labels: &LabelMap) -> MultiplicityTable {
        let mut per_label = vec![0u64; labels.len()];
        for row in &self.cells {
            for term in row.iter().flatten() {
                let label = labels.label_of(term).expect("cell term is labeled");
                per_label[label - 1] += 1;
            }
        }
        let mut histogram = BTreeMap::new();
        for &m in &per_label {
            *histogram.entry(m).or_insert(0) += 1;
        }
        MultiplicityTable {
            per_label,
            histogram,
        }
    }

    pub fn stats(&self) -> TableauStats {
        let present_cells = self
            .cells
            .iter()
            .map(|row| row.iter().flatten().count() as u64)
            .sum();
        let distinct: HashSet<&Term> = self.cells.iter().flatten().flatten().collect();
        TableauStats {
            lines: self.lines.len(),
            columns: self.columns.len(),
            present_cells,
            distinct: distinct.len() as u64,
        }
    }

    /// Word grid, numbered grid, and histogram in the layout the tableaux are
    /// usually displayed in.
    pub fn render_text(&self, labels: &LabelMap, mult: &MultiplicityTable) -> String {
        let stats = self.stats();
        let mut out = String::new();
        let _ = writeln!(
            out,
            "T_{} over {}: {} lines x {} columns, {} cells, {} distinct",
            self.order, self.sig, stats.lines, stats.columns, stats.present_cells, stats.distinct
        );

        let head_width = self
            .lines
            .iter()
            .map(|l| format!("p{},{}", l.place, self.sig.symbol(l.op)).len())
            .max()
            .unwrap_or(0);
        let word_width = self
            .cells
            .iter()
            .flatten()
            .flatten()
            .map(|t| render_polish(t, &self.sig).len())
            .max()
            .unwrap_or(1);

        out.push('\n');
        for (line, row) in self.lines.iter().zip(&self.cells) {
            let head = format!("p{},{}", line.place, self.sig.symbol(line.op));
            let _ = write!(out, "{head:>head_width$} |");
            for cell in row {
                match cell {
                    Some(t) => {
                        let _ = write!(out, " {:<word_width$}", render_polish(t, &self.sig));
                    }
                    None => {
                        let _ = write!(out, " {:<word_width$}", "-");
                    }
                }
            }
            out.push('\n');
        }

        let label_width = labels.len().to_string().len();
        out.push('\n');
        out.push_str("labels:\n");
        for (line, row) in self.lines.iter().zip(&self.cells) {
            let head = format!("p{},{}", line.place, self.sig.symbol(line.op));
            let _ = write!(out, "{head:>head_width$} |");
            for cell in row {
                match cell {
                    Some(t) => {
                        let label = labels.label_of(t).expect("cell term is labeled");
                        let _ = write!(out, " {label:>label_width$}");
                    }
                    None => {
                        let _ = write!(out, " {:>label_width$}", "-");
                    }
                }
            }
            out.push('\n');
        }

        out.push('\n');
        out.push_str("multiplicity histogram:\n");
        for (k, count) in mult.histogram() {
            let _ = writeln!(out, "M={k}: {count} iterates");
        }
        out
    }

    /// JSON view: lines as `[place, symbol]` pairs, columns as words, cells
    /// as label numbers (null where absent), histogram keyed by multiplicity.
    pub fn to_json(&self, labels: &LabelMap, mult: &MultiplicityTable) -> Value {
        let ops: Vec<Value> = self
            .sig
            .ops()
            .iter()
            .map(|op| json!({"symbol": op.symbol.to_string(), "arity": op.arity}))
            .collect();
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|l| json!([l.place, self.sig.symbol(l.op).to_string()]))
            .collect();
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|t| Value::from(render_polish(t, &self.sig)))
            .collect();
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| match cell {
                        Some(t) => json!(labels.label_of(t).expect("cell term is labeled")),
                        None => Value::Null,
                    })
                    .collect()
            })
            .collect();
        let histogram: serde_json::Map<String, Value> = mult
            .histogram()
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "n": self.order,
            "ops": ops,
            "lines": lines,
            "columns": columns,
            "cells": cells,
            "histogram": histogram,
        })
    }

    /// Grid of words as comma-separated lines, one row per tableau line.
    pub fn to_csv(&self, _labels: &LabelMap) -> String {
        let mut out = String::from("place,op");
        for column in &self.columns {
            let _ = write!(out, ",{}", render_polish(column, &self.sig));
        }
        out.push('\n');
        for (line, row) in self.lines.iter().zip(&self.cells) {
            let _ = write!(out, "{},{}", line.place, self.sig.symbol(line.op));
            for cell in row {
                match cell {
                    Some(t) => {
                        let _ = write!(out, ",{}", render_polish(t, &self.sig));
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_polish;

    fn vw() -> Signature {
        Signature::new([('V', 2), ('W', 2)]).unwrap()
    }

    fn single() -> Signature {
        Signature::new([('V', 2)]).unwrap()
    }

    fn words(tab: &Tableau) -> Vec<Vec<Option<String>>> {
        tab.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.as_ref().map(|t| render_polish(t, tab.sig())))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn t1_is_the_generator_column() {
        let tab = Tableau::build(&vw(), 1, &Limits::default()).unwrap();
        assert_eq!(
            words(&tab),
            vec![
                vec![Some("Vxx".to_string())],
                vec![Some("Wxx".to_string())]
            ]
        );
        assert_eq!(tab.lines(), &[
            TableauLine { place: 1, op: 0 },
            TableauLine { place: 1, op: 1 },
        ]);
    }

    #[test]
    fn t2_reproduces_printed_grid() {
        let tab = Tableau::build(&vw(), 2, &Limits::default()).unwrap();
        let expected: Vec<Vec<Option<String>>> = [
            ["VVxxx", "WVxxx"],
            ["VWxxx", "WWxxx"],
            ["VxVxx", "WxVxx"],
            ["VxWxx", "WxWxx"],
        ]
        .iter()
        .map(|row| row.iter().map(|w| Some(w.to_string())).collect())
        .collect();
        assert_eq!(words(&tab), expected);

        let labels = tab.canonical_labels();
        assert_eq!(labels.len(), 8);
        let sig = vw();
        assert_eq!(labels.label_of(&parse_polish("VVxxx", &sig).unwrap()), Some(1));
        assert_eq!(labels.label_of(&parse_polish("WVxxx", &sig).unwrap()), Some(2));
        assert_eq!(labels.label_of(&parse_polish("VxWxx", &sig).unwrap()), Some(7));
        assert_eq!(labels.label_of(&parse_polish("WxWxx", &sig).unwrap()), Some(8));
    }

    #[test]
    fn t3_dimensions_and_first_column() {
        let tab = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        let stats = tab.stats();
        assert_eq!(
            (stats.lines, stats.columns, stats.present_cells, stats.distinct),
            (6, 8, 48, 40)
        );
        let first_column: Vec<String> = (0..6)
            .map(|line| render_polish(tab.cell(line, 0).unwrap(), tab.sig()))
            .collect();
        assert_eq!(
            first_column,
            ["VVVxxxx", "VVWxxxx", "VVxVxxx", "VVxWxxx", "VVxxVxx", "VVxxWxx"]
        );
    }

    #[test]
    fn t3_line_labels_match_numbered_display() {
        let tab = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let line_labels = |line: usize| -> Vec<usize> {
            (0..8)
                .map(|col| labels.label_of(tab.cell(line, col).unwrap()).unwrap())
                .collect()
        };
        assert_eq!(line_labels(4), [5, 6, 13, 14, 33, 34, 35, 36]);
        assert_eq!(line_labels(5), [7, 8, 15, 16, 37, 38, 39, 40]);
    }

    #[test]
    fn t3_multiplicity_histogram() {
        let tab = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let mult = tab.multiplicity_table(&labels);
        assert_eq!(
            mult.histogram().clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 32), (2, 8)]
        );
    }

    #[test]
    fn t2_all_cells_distinct() {
        let tab = Tableau::build(&vw(), 2, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let mult = tab.multiplicity_table(&labels);
        assert_eq!(
            mult.histogram().clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 8)]
        );
    }

    #[test]
    fn single_op_t3_grid_and_duplicate() {
        let tab = Tableau::build(&single(), 3, &Limits::default()).unwrap();
        let expected: Vec<Vec<Option<String>>> = [
            ["VVVxxxx", "VVxxVxx"],
            ["VVxVxxx", "VxVVxxx"],
            ["VVxxVxx", "VxVxVxx"],
        ]
        .iter()
        .map(|row| row.iter().map(|w| Some(w.to_string())).collect())
        .collect();
        assert_eq!(words(&tab), expected);

        let labels = tab.canonical_labels();
        assert_eq!(labels.len(), 5);
        let sig = single();
        assert_eq!(
            labels.label_of(&parse_polish("VVxxVxx", &sig).unwrap()),
            Some(2)
        );
        let mult = tab.multiplicity_table(&labels);
        assert_eq!(
            mult.histogram().clone().into_iter().collect::<Vec<_>>(),
            vec![(1, 4), (2, 1)]
        );
    }

    #[test]
    fn single_op_t2_stats() {
        let tab = Tableau::build(&single(), 2, &Limits::default()).unwrap();
        let stats = tab.stats();
        assert_eq!(
            (stats.lines, stats.columns, stats.present_cells, stats.distinct),
            (2, 1, 2, 2)
        );
    }

    #[test]
    fn vw_t4_stats() {
        let tab = Tableau::build(&vw(), 4, &Limits::default()).unwrap();
        let stats = tab.stats();
        assert_eq!(
            (stats.lines, stats.columns, stats.present_cells, stats.distinct),
            (8, 40, 320, 224)
        );
    }

    #[test]
    fn mixed_arity_is_ragged() {
        let sig = Signature::new([('V', 2), ('U', 3)]).unwrap();
        let tab = Tableau::build(&sig, 2, &Limits::default()).unwrap();
        let stats = tab.stats();
        assert_eq!(stats.lines, 6);
        assert_eq!(stats.columns, 2);
        assert_eq!(stats.present_cells, 10);
        // every order-2 iterate shows up despite the ragged grid
        assert_eq!(stats.distinct, 10);
        // parent Vxx has two places, so place-3 lines skip it
        assert!(tab.cell(4, 0).is_none());
        assert_eq!(render_polish(tab.cell(4, 1).unwrap(), &sig), "UxxVxx");
    }

    #[test]
    fn arity_one_rejected() {
        let sig = Signature::new([('V', 2), ('u', 1)]).unwrap();
        assert_eq!(
            Tableau::build(&sig, 2, &Limits::default()),
            Err(Error::TableauNeedsArityTwo {
                symbol: 'u',
                arity: 1
            })
        );
    }

    #[test]
    fn order_zero_rejected() {
        assert_eq!(
            Tableau::build(&vw(), 0, &Limits::default()),
            Err(Error::OrderTooSmall { min: 1, got: 0 })
        );
    }

    #[test]
    fn cap_guard_applies() {
        let limits = Limits {
            max_cells: 47,
            ..Limits::default()
        };
        assert!(matches!(
            Tableau::build(&vw(), 3, &limits),
            Err(Error::ResourceCap { cap: 47, .. })
        ));
    }

    #[test]
    fn labels_stable_across_rebuilds() {
        let a = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        let b = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical_labels().terms(), b.canonical_labels().terms());
    }
}
