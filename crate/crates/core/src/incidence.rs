use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::counting::{binomial, structure_catalan, CountSequence};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::signature::Signature;
use crate::tableau::{LabelMap, MultiplicityTable, Tableau};

/// Symmetric boolean matrix of formally reducible identities.
///
/// `delta(i, j)` is true exactly when iterates `i` and `j` occur in a common
/// tableau line, i.e. both arise from one identical substitution (same place,
/// same generator) applied to order-`n-1` iterates. Rows are packed bit
/// vectors; row sums are counted during construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    size: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    row_sums: Vec<u64>,
}

impl IncidenceMatrix {
    /// Builds the matrix from a tableau and its canonical labels.
    pub fn build(tab: &Tableau, labels: &LabelMap, limits: &Limits) -> Result<Self> {
        if tab.order() < 2 {
            return Err(Error::OrderTooSmall {
                min: 2,
                got: tab.order(),
            });
        }
        let size = labels.len();
        let needed = BigUint::from(size) * BigUint::from(size);
        if needed > BigUint::from(limits.max_bits) {
            return Err(Error::ResourceCap {
                predicted: needed,
                cap: limits.max_bits,
            });
        }

        let words_per_row = size.div_ceil(64);
        let mut bits = vec![0u64; size * words_per_row];
        let mut line_mask = vec![0u64; words_per_row];
        let mut members = Vec::new();
        for row in tab.rows() {
            line_mask.fill(0);
            members.clear();
            for term in row.iter().flatten() {
                let idx = labels.label_of(term).expect("cell term is labeled") - 1;
                if line_mask[idx / 64] & (1 << (idx % 64)) == 0 {
                    line_mask[idx / 64] |= 1 << (idx % 64);
                    members.push(idx);
                }
            }
            for &idx in &members {
                let row_bits = &mut bits[idx * words_per_row..(idx + 1) * words_per_row];
                for (word, mask) in row_bits.iter_mut().zip(&line_mask) {
                    *word |= mask;
                }
            }
        }

        let row_sums = (0..size)
            .map(|i| {
                bits[i * words_per_row..(i + 1) * words_per_row]
                    .iter()
                    .map(|w| w.count_ones() as u64)
                    .sum()
            })
            .collect();

        Ok(IncidenceMatrix {
            size,
            words_per_row,
            bits,
            row_sums,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Reducibility indicator for 1-based labels.
    pub fn delta(&self, i: usize, j: usize) -> bool {
        assert!(i >= 1 && i <= self.size && j >= 1 && j <= self.size);
        let (i, j) = (i - 1, j - 1);
        self.bits[i * self.words_per_row + j / 64] & (1 << (j % 64)) != 0
    }

    pub fn row_sums(&self) -> &[u64] {
        &self.row_sums
    }

    /// 1-based labels of the ones in the given 1-based row.
    pub fn row_ones(&self, i: usize) -> Vec<usize> {
        (1..=self.size).filter(|&j| self.delta(i, j)).collect()
    }

    /// Total number of ones: ordered pairs, diagonal included.
    pub fn reducible_count(&self) -> BigUint {
        self.row_sums.iter().map(|&s| BigUint::from(s)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (1..=self.size).all(|i| (i..=self.size).all(|j| self.delta(i, j) == self.delta(j, i)))
    }

    /// 0/1 cells, one comma-separated line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.size * (2 * self.size + 1));
        for i in 1..=self.size {
            for j in 1..=self.size {
                if j > 1 {
                    out.push(',');
                }
                out.push(if self.delta(i, j) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, frequency: &Frequency) -> Value {
        let rows: Vec<Value> = (1..=self.size).map(|i| json!(self.row_ones(i))).collect();
        json!({
            "size": self.size,
            "rows": rows,
            "rowSums": self.row_sums,
            "I_n": self.reducible_count().to_string(),
            "frequency": {
                "num": frequency.numerator.to_string(),
                "den": frequency.denominator.to_string(),
            },
        })
    }
}

/// `I_n / (S_n)^2` as an exact rational over ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frequency {
    pub numerator: BigUint,
    pub denominator: BigUint,
}

impl Frequency {
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        Frequency {
            numerator,
            denominator,
        }
    }

    /// Lowest-terms form.
    pub fn reduced(&self) -> (BigUint, BigUint) {
        if self.numerator.is_zero() {
            return (BigUint::zero(), BigUint::from(1u32));
        }
        let gcd = self.numerator.gcd(&self.denominator);
        (&self.numerator / &gcd, &self.denominator / &gcd)
    }

    pub fn to_f64(&self) -> f64 {
        // frequencies are bounded by 1, so plain conversion is safe for any
        // size reachable under the caps
        self.numerator.to_f64().unwrap_or(f64::NAN) / self.denominator.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::fmt::Display for Frequency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (num, den) = self.reduced();
        write!(
            f,
            "{}/{} = {}/{} (~{:.6})",
            self.numerator,
            self.denominator,
            num,
            den,
            self.to_f64()
        )
    }
}

/// One row of the theorem check: observed row sum against the
/// inclusion-exclusion prediction from the multiplicity alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub label: usize,
    pub multiplicity: u64,
    pub observed: u64,
    pub predicted: BigUint,
    pub matches: bool,
}

/// Full verification record for one signature and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub sig: Signature,
    pub order: usize,
    /// Number of distinct iterates `S_n` (the matrix dimension).
    pub distinct: u64,
    pub rows: Vec<RowCheck>,
    pub all_rows_match: bool,
    /// `I_n` counted from the matrix.
    pub observed_total: BigUint,
    /// `I_n` from the histogram formula `sum_k T_nk * rowsum(k)`.
    pub predicted_total: BigUint,
    pub totals_match: bool,
    pub frequency: Frequency,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.all_rows_match && self.totals_match
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "label": r.label,
                    "M": r.multiplicity,
                    "observed": r.observed,
                    "predicted": r.predicted.to_string(),
                    "match": r.matches,
                })
            })
            .collect();
        json!({
            "n": self.order,
            "ops": self.sig.to_string(),
            "S_n": self.distinct,
            "rows": rows,
            "allRowsMatch": self.all_rows_match,
            "I_n": self.observed_total.to_string(),
            "predictedI_n": self.predicted_total.to_string(),
            "totalsMatch": self.totals_match,
            "frequency": {
                "num": self.frequency.numerator.to_string(),
                "den": self.frequency.denominator.to_string(),
            },
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "theorem check: n={}, ops={}, S_n={}",
            self.order, self.sig, self.distinct
        );
        let _ = writeln!(out, "label  M  observed  predicted  match");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5}  {}  {:>8}  {:>9}  {}",
                r.label,
                r.multiplicity,
                r.observed,
                r.predicted,
                if r.matches { "yes" } else { "NO" }
            );
        }
        let _ = writeln!(out, "I_n (matrix)    = {}", self.observed_total);
        let _ = writeln!(out, "I_n (histogram) = {}", self.predicted_total);
        let _ = writeln!(out, "all rows match: {}", self.all_rows_match);
        let _ = writeln!(out, "frequency = {}", self.frequency);
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("label,M,observed,predicted,match\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.label, r.multiplicity, r.observed, r.predicted, r.matches
            );
        }
        out
    }
}

/// Predicted number of ones in the row of an iterate of multiplicity `m`:
/// `sum_{v=1}^{m} (-1)^(v-1) C(m, v) S_{n-v}` over the structure's own
/// Catalan numbers.
pub fn theorem_row_sum(multiplicity: u64, order: usize, sig: &Signature) -> BigUint {
    assert!(multiplicity >= 1, "multiplicity is at least 1");
    assert!(order >= 1, "theorem applies from order 1 up");
    let counts = structure_catalan(sig, order - 1);
    theorem_row_sum_from(multiplicity, order, &counts)
}

fn theorem_row_sum_from(multiplicity: u64, order: usize, counts: &CountSequence) -> BigUint {
    let mut acc = BigInt::zero();
    for v in 1..=multiplicity.min(order as u64) {
        let term = BigInt::from(binomial(multiplicity, v))
            * BigInt::from(counts.get(order - v as usize).clone());
        if v % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint()
        .expect("alternating row-sum prediction is nonnegative")
}

/// `I_n` from the histogram alone: `sum_k T_nk * rowsum(k)`.
pub fn reducible_count_via_histogram(sig: &Signature, order: usize, limits: &Limits) -> Result<BigUint> {
    let tab = Tableau::build(sig, order, limits)?;
    let labels = tab.canonical_labels();
    let mult = tab.multiplicity_table(&labels);
    let counts = structure_catalan(sig, order);
    Ok(histogram_total(&mult, order, &counts))
}

fn histogram_total(mult: &MultiplicityTable, order: usize, counts: &CountSequence) -> BigUint {
    mult.histogram()
        .iter()
        .map(|(&k, &t)| BigUint::from(t) * theorem_row_sum_from(k, order, counts))
        .sum()
}

/// Builds tableau, labels, multiplicities and matrix for the given order and
/// checks every row sum and the two `I_n` routes against each other.
pub fn verify_theorem(sig: &Signature, order: usize, limits: &Limits) -> Result<TheoremReport> {
    let tab = Tableau::build(sig, order, limits)?;
    let labels = tab.canonical_labels();
    let mult = tab.multiplicity_table(&labels);
    let matrix = IncidenceMatrix::build(&tab, &labels, limits)?;
    let counts = structure_catalan(sig, order);

    let rows: Vec<RowCheck> = (1..=labels.len())
        .map(|label| {
            let multiplicity = mult.multiplicity(label);
            let observed = matrix.row_sums()[label - 1];
            let predicted = theorem_row_sum_from(multiplicity, order, &counts);
            let matches = BigUint::from(observed) == predicted;
            RowCheck {
                label,
                multiplicity,
                observed,
                predicted,
                matches,
            }
        })
        .collect();

    let all_rows_match = rows.iter().all(|r| r.matches);
    let observed_total = matrix.reducible_count();
    let predicted_total = histogram_total(&mult, order, &counts);
    let totals_match = observed_total == predicted_total;
    let s_n = counts.get(order);
    let frequency = Frequency::new(observed_total.clone(), s_n * s_n);

    Ok(TheoremReport {
        sig: sig.clone(),
        order,
        distinct: labels.len() as u64,
        rows,
        all_rows_match,
        observed_total,
        predicted_total,
        totals_match,
        frequency,
    })
}

/// Text rendering of the matrix in the usual exhibit layout: a header of
/// column labels, blank for 0 and `1` for incidence, then the row sum and the
/// multiplicity as trailing columns.
pub fn render_exhibit(
    matrix: &IncidenceMatrix,
    mult: &MultiplicityTable,
    sig: &Signature,
    order: usize,
) -> String {
    let size = matrix.size();
    let cell_width = size.to_string().len();
    let head_width = cell_width.max(3);
    let sum_width = matrix
        .row_sums()
        .iter()
        .max()
        .map(|s| s.to_string().len())
        .unwrap_or(1);
    let mult_width = mult
        .per_label()
        .iter()
        .max()
        .map(|m| m.to_string().len())
        .unwrap_or(1);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "Incidence matrix for n={order} over {sig} (blank = 0)"
    );
    let _ = write!(out, "{:>head_width$} |", "i\\j");
    for j in 1..=size {
        let _ = write!(out, " {j:>cell_width$}");
    }
    let _ = writeln!(out, " | {:>sum_width$} {:>mult_width$}", "\u{3a3}", "M");
    for i in 1..=size {
        let _ = write!(out, "{i:>head_width$} |");
        for j in 1..=size {
            let mark = if matrix.delta(i, j) { "1" } else { "" };
            let _ = write!(out, " {mark:>cell_width$}");
        }
        let _ = writeln!(
            out,
            " | {:>sum_width$} {:>mult_width$}",
            matrix.row_sums()[i - 1],
            mult.multiplicity(i)
        );
    }
    out
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

    fn matrix_for(sig: &Signature, order: usize) -> (IncidenceMatrix, MultiplicityTable) {
        let tab = Tableau::build(sig, order, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let mult = tab.multiplicity_table(&labels);
        let matrix = IncidenceMatrix::build(&tab, &labels, &Limits::default()).unwrap();
        (matrix, mult)
    }

    #[test]
    fn exhibit_row_one_and_five() {
        let (matrix, _) = matrix_for(&vw(), 3);
        assert_eq!(matrix.row_ones(1), (1..=8).collect::<Vec<_>>());
        assert_eq!(
            matrix.row_ones(5),
            vec![1, 2, 3, 4, 5, 6, 7, 8, 13, 14, 33, 34, 35, 36]
        );
        assert_eq!(matrix.row_sums()[4], 14);
    }

    #[test]
    fn row_33_forced_by_symmetry() {
        let (matrix, _) = matrix_for(&vw(), 3);
        assert_eq!(matrix.row_ones(33), vec![5, 6, 13, 14, 33, 34, 35, 36]);
    }

    #[test]
    fn totals_for_printed_example() {
        let (matrix, _) = matrix_for(&vw(), 3);
        assert!(matrix.is_symmetric());
        assert!((1..=40).all(|i| matrix.delta(i, i)));
        assert_eq!(matrix.reducible_count(), BigUint::from(368u32));
    }

    #[test]
    fn order_two_total() {
        let (matrix, _) = matrix_for(&vw(), 2);
        assert_eq!(matrix.reducible_count(), BigUint::from(16u32));
    }

    #[test]
    fn single_op_order_three() {
        let (matrix, _) = matrix_for(&single(), 3);
        assert_eq!(matrix.row_sums(), &[2, 3, 2, 2, 2]);
        assert_eq!(matrix.reducible_count(), BigUint::from(11u32));
    }

    #[test]
    fn theorem_row_sum_examples() {
        assert_eq!(theorem_row_sum(1, 3, &vw()), BigUint::from(8u32));
        assert_eq!(theorem_row_sum(2, 3, &vw()), BigUint::from(14u32));
        assert_eq!(theorem_row_sum(2, 3, &single()), BigUint::from(3u32));
    }

    #[test]
    fn verify_printed_example() {
        let report = verify_theorem(&vw(), 3, &Limits::default()).unwrap();
        assert!(report.passed());
        assert_eq!(report.rows.len(), 40);
        assert_eq!(report.observed_total, BigUint::from(368u32));
        assert_eq!(report.frequency.denominator, BigUint::from(1600u32));
        assert_eq!(
            report.frequency.reduced(),
            (BigUint::from(23u32), BigUint::from(100u32))
        );
    }

    #[test]
    fn verify_order_two_rows_all_match() {
        let report = verify_theorem(&vw(), 2, &Limits::default()).unwrap();
        assert!(report.passed());
        assert!(report
            .rows
            .iter()
            .all(|r| r.multiplicity == 1 && r.observed == 2));
    }

    #[test]
    fn verify_single_op_small_orders() {
        for order in [3, 4, 5] {
            let report = verify_theorem(&single(), order, &Limits::default()).unwrap();
            assert!(report.passed(), "order {order} should verify");
        }
    }

    #[test]
    fn histogram_route_matches_matrix_route() {
        // {V} at order 3 is the worked case: 4*2 + 1*3 = 11
        assert_eq!(
            reducible_count_via_histogram(&single(), 3, &Limits::default()).unwrap(),
            BigUint::from(11u32)
        );
        for (sig, order) in [(vw(), 4), (single(), 5)] {
            let (matrix, _) = matrix_for(&sig, order);
            let via_hist =
                reducible_count_via_histogram(&sig, order, &Limits::default()).unwrap();
            assert_eq!(matrix.reducible_count(), via_hist);
        }
    }

    #[test]
    fn matrix_requires_order_two() {
        let tab = Tableau::build(&vw(), 1, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        assert_eq!(
            IncidenceMatrix::build(&tab, &labels, &Limits::default()),
            Err(Error::OrderTooSmall { min: 2, got: 1 })
        );
    }

    #[test]
    fn matrix_bit_cap() {
        let tab = Tableau::build(&vw(), 3, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let limits = Limits {
            max_bits: 1599,
            ..Limits::default()
        };
        assert!(matches!(
            IncidenceMatrix::build(&tab, &labels, &limits),
            Err(Error::ResourceCap { cap: 1599, .. })
        ));
    }

    #[test]
    fn exhibit_text_has_368_marks() {
        let (matrix, mult) = matrix_for(&vw(), 3);
        let text = render_exhibit(&matrix, &mult, &vw(), 3);
        let body_ones: usize = text
            .lines()
            .skip(2) // title and header
            .map(|line| {
                let start = line.find('|').unwrap();
                let end = line.rfind('|').unwrap();
                line[start..end].matches('1').count()
            })
            .sum();
        assert_eq!(body_ones, 368);
    }

    #[test]
    fn frequency_display_reduces() {
        let f = Frequency::new(BigUint::from(368u32), BigUint::from(1600u32));
        assert_eq!(f.to_string(), "368/1600 = 23/100 (~0.230000)");
    }

    #[test]
    fn delta_against_word_pairs() {
        let sig = vw();
        let tab = Tableau::build(&sig, 3, &Limits::default()).unwrap();
        let labels = tab.canonical_labels();
        let matrix = IncidenceMatrix::build(&tab, &labels, &Limits::default()).unwrap();
        let five = labels
            .label_of(&parse_polish("VVxxVxx", &sig).unwrap())
            .unwrap();
        assert_eq!(five, 5);
        assert!(matrix.delta(5, 33));
        assert!(!matrix.delta(1, 9));
    }
}
