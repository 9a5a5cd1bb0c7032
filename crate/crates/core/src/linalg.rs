//! Sparse exact linear algebra over a [`Field`]: column echelon forms with
//! tracked combinations, which give rank, kernel and coordinate solving.

use std::collections::HashMap;

use crate::field::Field;

/// Sparse vector: `(index, value)` pairs with strictly increasing indices and
/// no zero values.
pub type SparseVec<E> = Vec<(usize, E)>;

/// `a + c·b`
pub fn add_scaled<F: Field>(field: &F, a: &[(usize, F::Elem)], c: &F::Elem, b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, field.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = field.add(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<F: Field>(field: &F, c: &F::Elem, a: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, field.mul(c, v))).collect()
}

/// Build a sparse vector from unsorted entries, summing repeats.
pub fn collect_sparse<F: Field>(field: &F, mut entries: Vec<(usize, F::Elem)>) -> SparseVec<F::Elem> {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec<F::Elem> = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 = field.add(&last.1, &v),
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

/// Column-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<E> {
    pub rows: usize,
    pub columns: Vec<SparseVec<E>>,
}

impl<E: Clone + PartialEq> SparseMatrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![Vec::new(); cols] }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }
}

impl<E: Clone + PartialEq> SparseMatrix<E> {
    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        SparseMatrix { rows: n, columns: (0..n).map(|i| vec![(i, field.one())]).collect() }
    }

    pub fn apply<F: Field<Elem = E>>(&self, field: &F, v: &[(usize, E)]) -> SparseVec<E> {
        let mut acc = Vec::new();
        for (j, c) in v {
            acc = add_scaled(field, &acc, c, &self.columns[*j]);
        }
        acc
    }

    /// `self · rhs`
    pub fn compose<F: Field<Elem = E>>(&self, field: &F, rhs: &SparseMatrix<E>) -> SparseMatrix<E> {
        assert_eq!(self.cols(), rhs.rows, "incompatible shapes");
        SparseMatrix { rows: self.rows, columns: rhs.columns.iter().map(|c| self.apply(field, c)).collect() }
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, rhs: &SparseMatrix<E>) -> SparseMatrix<E> {
        self.add_scaled(field, &field.one(), rhs)
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, rhs: &SparseMatrix<E>) -> SparseMatrix<E> {
        self.add_scaled(field, &field.neg(&field.one()), rhs)
    }

    /// `self + c·rhs`
    pub fn add_scaled<F: Field<Elem = E>>(&self, field: &F, c: &E, rhs: &SparseMatrix<E>) -> SparseMatrix<E> {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "incompatible shapes");
        SparseMatrix {
            rows: self.rows,
            columns: self.columns.iter().zip(&rhs.columns).map(|(a, b)| add_scaled(field, a, c, b)).collect(),
        }
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        let mut e = Echelon::new(field.clone());
        for c in &self.columns {
            e.push(c.clone());
        }
        e.rank()
    }
}

/// Incremental column echelon form. Each pushed column is reduced against the
/// stored ones by its lowest (largest-index) entry; the combination of input
/// columns producing each stored column is tracked, so dependent inputs
/// yield kernel vectors and targets can be expressed in input coordinates.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    cols: Vec<SparseVec<F::Elem>>,
    combos: Vec<SparseVec<F::Elem>>,
    pivot: HashMap<usize, usize>,
    inputs: usize,
    kernel: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F) -> Self {
        Echelon { field, cols: Vec::new(), combos: Vec::new(), pivot: HashMap::new(), inputs: 0, kernel: Vec::new() }
    }

    pub fn from_columns(field: F, columns: impl IntoIterator<Item = SparseVec<F::Elem>>) -> Self {
        let mut e = Echelon::new(field);
        for c in columns {
            e.push(c);
        }
        e
    }

    /// Number of columns pushed so far.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// One kernel vector per dependent input, in input coordinates, each with
    /// its first nonzero coefficient equal to one.
    pub fn kernel(&self) -> &[SparseVec<F::Elem>] {
        &self.kernel
    }

    /// Push a column; returns whether it was independent of the previous ones.
    pub fn push(&mut self, v: SparseVec<F::Elem>) -> bool {
        let idx = self.inputs;
        self.inputs += 1;
        let (rem, a) = self.reduce_tracked(v);
        // rem = input_idx - Σ a_j input_j
        let minus_one = self.field.neg(&self.field.one());
        let mut combo = scale(&self.field, &minus_one, &a);
        combo.push((idx, self.field.one()));
        match rem.last() {
            None => {
                let lead = combo[0].1.clone();
                let k = scale(&self.field, &self.field.inv(&lead), &combo);
                self.kernel.push(k);
                false
            }
            Some((low, _)) => {
                self.pivot.insert(*low, self.cols.len());
                self.cols.push(rem);
                self.combos.push(combo);
                true
            }
        }
    }

    /// Reduce `v`; returns the remainder `r` and coefficients `a` with
    /// `v = r + Σ a_j · input_j`.
    fn reduce_tracked(&self, mut v: SparseVec<F::Elem>) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut acc: SparseVec<F::Elem> = Vec::new();
        while let Some((low, val)) = v.last().cloned() {
            let Some(&c) = self.pivot.get(&low) else { break };
            let col = &self.cols[c];
            let factor = f.div(&val, &col.last().unwrap().1);
            v = add_scaled(f, &v, &f.neg(&factor), col);
            acc = add_scaled(f, &acc, &factor, &self.combos[c]);
        }
        (v, acc)
    }

    /// Coefficients `a` over the inputs with `v = Σ a_j · input_j`, or `None`
    /// when `v` is outside their span.
    pub fn solve(&self, v: SparseVec<F::Elem>) -> Option<SparseVec<F::Elem>> {
        let mut v = v;
        let f = &self.field;
        let mut acc: SparseVec<F::Elem> = Vec::new();
        loop {
            let Some((low, val)) = v.last().cloned() else { return Some(acc) };
            let &c = self.pivot.get(&low)?;
            let col = &self.cols[c];
            let factor = f.div(&val, &col.last().unwrap().1);
            v = add_scaled(f, &v, &f.neg(&factor), col);
            acc = add_scaled(f, &acc, &factor, &self.combos[c]);
        }
    }

    pub fn contains(&self, v: SparseVec<F::Elem>) -> bool {
        self.solve(v).is_some()
    }
}
