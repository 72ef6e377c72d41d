//! Dense matrices over the two-element field, one bit per entry.

use std::fmt;

const WORD: usize = 64;

/// A bit vector of fixed length over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        BitRow {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    pub fn first_one_from(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut w = start / WORD;
        let mut word = self.words[w] & (!0u64 << (start % WORD));
        loop {
            if word != 0 {
                return Some(w * WORD + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * WORD + t)
            })
        })
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitRow>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitRow::zeros(cols); rows],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitRow>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitRow {
        &self.data[r]
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// Rank by forward elimination. Columns are scanned left to right and the
    /// first remaining row with a one in the current column becomes the pivot.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        eliminate(&mut rows, self.cols).len()
    }

    /// Basis of `{x : A x = 0}`, each vector of length `cols`.
    pub fn kernel_basis(&self) -> Vec<BitRow> {
        let mut rows = self.data.clone();
        let pivots = eliminate(&mut rows, self.cols);
        // Back-substitute to reduced row echelon form.
        for (i, &pc) in pivots.iter().enumerate().rev() {
            for j in 0..i {
                if rows[j].get(pc) {
                    let (head, tail) = rows.split_at_mut(i);
                    head[j].xor_assign(&tail[0]);
                }
            }
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitRow::zeros(self.cols);
                v.set(free, true);
                for (i, &pc) in pivots.iter().enumerate() {
                    if rows[i].get(free) {
                        v.set(pc, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Multiplies `self` by a column vector.
    pub fn mul_vec(&self, v: &BitRow) -> BitRow {
        assert_eq!(v.len(), self.cols);
        let mut out = BitRow::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            let parity = row
                .words
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            out.set(r, parity % 2 == 1);
        }
        out
    }
}

/// Brings `rows` to row echelon form in place and returns the pivot columns,
/// one per leading row.
fn eliminate(rows: &mut [BitRow], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(next, p);
        let (head, tail) = rows.split_at_mut(next + 1);
        let pivot = &head[next];
        for r in tail.iter_mut() {
            if r.get(c) {
                r.xor_assign(pivot);
            }
        }
        pivots.push(c);
        next += 1;
    }
    pivots
}

/// Incrementally grown row echelon basis of a subspace of GF(2)^len.
///
/// Every stored row has its leading one in a distinct column and zeros
/// before it.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<BitRow>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        EchelonBasis {
            len,
            rows: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result has no ones in pivot columns
    /// and is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &mut BitRow) {
        assert_eq!(v.len(), self.len);
        let mut pos = 0;
        while let Some(p) = v.first_one_from(pos) {
            if let Some(r) = self.pivot_row[p] {
                v.xor_assign(&self.rows[r]);
            }
            pos = p + 1;
        }
    }

    /// Adds `v` if it is independent of the current span.
    pub fn insert(&mut self, mut v: BitRow) -> bool {
        self.reduce(&mut v);
        match v.first_one() {
            None => false,
            Some(p) => {
                self.pivot_row[p] = Some(self.rows.len());
                self.rows.push(v);
                true
            }
        }
    }

    pub fn contains(&self, v: &BitRow) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}
