//! Regular chain complexes `Ω_•(P)` of path complexes, their homology,
//! induced chain maps, the lifting map into the cylinder and chain homotopies
//! built from one-step homotopies.

use std::collections::{BTreeMap, HashMap};

use crate::complexes::{
    allowed_path_complex, classify_path_morphism, cylinder, cylinder_lift_path, directed_flag_complex, ElementaryPath,
    PathComplex, PathMorphismClass,
};
use crate::digraph::{Digraph, VertexMap};
use crate::field::{Field, FieldSpec};
use crate::homotopy::MultiStepWitness;
use crate::linalg::{add_scaled, collect_sparse, Echelon, SparseMatrix, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("requested degree {top} but the complex is only built to degree {max_dim}")]
    TruncationBudget { top: usize, max_dim: usize },
    #[error("complex holds the irregular path {0}")]
    NotRegular(ElementaryPath),
    #[error("map is not a weak path morphism: {0}")]
    NotWeak(String),
    #[error("chain in degree {0} does not lie in Ω")]
    NotInOmega(usize),
    #[error("witness step {index} is not a verified one-step homotopy: {reason}")]
    UnverifiableStep { index: usize, reason: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A formal linear combination of regular paths of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<E> {
    pub degree: usize,
    pub terms: BTreeMap<ElementaryPath, E>,
}

impl<E: Clone + PartialEq> Chain<E> {
    pub fn zero(degree: usize) -> Self {
        Chain { degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `1 · p`
    pub fn path<F: Field<Elem = E>>(field: &F, p: ElementaryPath) -> Self {
        let mut c = Chain::zero(p.degree());
        c.terms.insert(p, field.one());
        c
    }

    pub fn add_term<F: Field<Elem = E>>(&mut self, field: &F, p: ElementaryPath, coeff: &E) {
        debug_assert_eq!(p.degree(), self.degree);
        if field.is_zero(coeff) {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(v) => {
                *v = field.add(v, coeff);
                if field.is_zero(v) {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, coeff.clone());
            }
        }
    }

    /// `self + c·other`
    pub fn add_scaled<F: Field<Elem = E>>(&self, field: &F, c: &E, other: &Chain<E>) -> Chain<E> {
        let mut out = self.clone();
        for (p, v) in &other.terms {
            out.add_term(field, p.clone(), &field.mul(c, v));
        }
        out
    }

    /// Coordinates with respect to the degree-`degree` paths of `p`, or `None`
    /// if the support leaves `p`.
    pub fn coordinates<F: Field<Elem = E>>(&self, field: &F, p: &PathComplex) -> Option<SparseVec<E>> {
        let entries = self.terms.iter().map(|(q, v)| p.index_of(q).map(|i| (i, v.clone()))).collect::<Option<Vec<_>>>()?;
        Some(collect_sparse(field, entries))
    }

    pub fn from_coordinates<F: Field<Elem = E>>(field: &F, p: &PathComplex, degree: usize, v: &[(usize, E)]) -> Self {
        let mut c = Chain::zero(degree);
        for (i, x) in v {
            c.add_term(field, p.paths(degree)[*i].clone(), x);
        }
        c
    }
}

/// Regular boundary: the alternating face sum with irregular faces dropped.
pub fn regular_boundary<F: Field>(field: &F, c: &Chain<F::Elem>) -> Chain<F::Elem> {
    let mut out = Chain::zero(c.degree.saturating_sub(1));
    if c.degree == 0 {
        return out;
    }
    for (p, v) in &c.terms {
        for i in 0..p.len() {
            let face = p.face(i);
            if face.is_regular() {
                out.add_term(field, face, &field.mul(&field.sign(i), v));
            }
        }
    }
    out
}

/// Push a chain forward along a vertex map, killing irregular images.
pub fn push_forward<F: Field>(field: &F, f: &VertexMap, c: &Chain<F::Elem>) -> Chain<F::Elem> {
    let mut out = Chain::zero(c.degree);
    for (p, v) in &c.terms {
        let img = p.map(f);
        if img.is_regular() {
            out.add_term(field, img, v);
        }
    }
    out
}

/// The lifting map into the cylinder:
/// `v0…vk ↦ Σ_i (−1)^i (v0,0)…(vi,0)(vi,1)…(vk,1)`.
pub fn lift<F: Field>(field: &F, c: &Chain<F::Elem>) -> Chain<F::Elem> {
    let mut out = Chain::zero(c.degree + 1);
    for (p, v) in &c.terms {
        for i in 0..p.len() {
            out.add_term(field, cylinder_lift_path(p, i), &field.mul(&field.sign(i), v));
        }
    }
    out
}

/// Bases of `Ω_k(P)` and the boundary matrices between them.
#[derive(Clone, Debug)]
pub struct ChainComplexRep<F: Field> {
    field: F,
    complex: PathComplex,
    top: usize,
    /// `bases[k]`: Ω_k basis in coordinates of `complex.paths(k)`.
    bases: Vec<Vec<SparseVec<F::Elem>>>,
    solvers: Vec<Echelon<F>>,
    /// `boundary[k]`: ∂_k from Ω_k to Ω_{k−1}, in basis coordinates.
    boundary: Vec<SparseMatrix<F::Elem>>,
    cap_rank: Option<usize>,
}

/// Betti numbers, with a flag on the top value when the complex was not built
/// high enough to know the rank of the next boundary map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiNumbers {
    pub values: Vec<usize>,
    pub top_truncation_sensitive: bool,
}

fn omega_basis<F: Field>(field: &F, p: &PathComplex, k: usize) -> Vec<SparseVec<F::Elem>> {
    if k == 0 {
        return (0..p.count(0)).map(|i| vec![(i, field.one())]).collect();
    }
    let mut forbidden: HashMap<ElementaryPath, usize> = HashMap::new();
    let mut e = Echelon::new(field.clone());
    for path in p.paths(k) {
        let mut entries = Vec::new();
        for i in 0..path.len() {
            let face = path.face(i);
            if face.is_regular() && !p.contains(&face) {
                let n = forbidden.len();
                let row = *forbidden.entry(face).or_insert(n);
                entries.push((row, field.sign(i)));
            }
        }
        e.push(collect_sparse(field, entries));
    }
    e.kernel().to_vec()
}

/// Build `Ω_0 … Ω_top` of a regular path complex over `field`.
///
/// The rank of `∂_{top+1}` is also computed when `P` reaches degree
/// `top + 1`, so that the top Betti number is exact.
pub fn omega_complex<F: Field>(p: &PathComplex, top: usize, field: F) -> Result<ChainComplexRep<F>, ChainError> {
    if top > p.max_dim() {
        return Err(ChainError::TruncationBudget { top, max_dim: p.max_dim() });
    }
    if let Some(bad) = p.iter().find(|q| !q.is_regular()) {
        return Err(ChainError::NotRegular(bad.clone()));
    }
    let reach = (top + 1).min(p.max_dim());
    let mut bases: Vec<Vec<SparseVec<F::Elem>>> = Vec::new();
    let mut solvers: Vec<Echelon<F>> = Vec::new();
    let mut boundary = Vec::new();
    let mut cap_rank = None;
    for k in 0..=reach {
        let basis = omega_basis(&field, p, k);
        let matrix = if k == 0 {
            SparseMatrix::zero(0, basis.len())
        } else {
            let cols = basis
                .iter()
                .map(|b| {
                    let c = Chain::from_coordinates(&field, p, k, b);
                    let d = regular_boundary(&field, &c).coordinates(&field, p).expect("Ω basis boundary stays in P");
                    solvers[k - 1].solve(d).expect("boundary of Ω_k lies in Ω_{k-1}")
                })
                .collect();
            SparseMatrix { rows: bases[k - 1].len(), columns: cols }
        };
        if k == top + 1 {
            cap_rank = Some(matrix.rank(&field));
            break;
        }
        solvers.push(Echelon::from_columns(field.clone(), basis.iter().cloned()));
        bases.push(basis);
        boundary.push(matrix);
    }
    if cap_rank.is_none() && p.count(top) == 0 {
        cap_rank = Some(0);
    }
    Ok(ChainComplexRep { field, complex: p.clone(), top, bases, solvers, boundary, cap_rank })
}

impl<F: Field> ChainComplexRep<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn field_spec(&self) -> FieldSpec {
        self.field.spec()
    }

    pub fn complex(&self) -> &PathComplex {
        &self.complex
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn dim(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    /// Ω_k basis vectors, in coordinates of `complex().paths(k)`.
    pub fn basis(&self, k: usize) -> &[SparseVec<F::Elem>] {
        &self.bases[k]
    }

    pub fn basis_chain(&self, k: usize, i: usize) -> Chain<F::Elem> {
        Chain::from_coordinates(&self.field, &self.complex, k, &self.bases[k][i])
    }

    pub fn boundary(&self, k: usize) -> &SparseMatrix<F::Elem> {
        &self.boundary[k]
    }

    /// Chain with the given Ω_k coordinates.
    pub fn chain(&self, k: usize, coords: &[(usize, F::Elem)]) -> Chain<F::Elem> {
        let mut acc = Vec::new();
        for (i, c) in coords {
            acc = add_scaled(&self.field, &acc, c, &self.bases[k][*i]);
        }
        Chain::from_coordinates(&self.field, &self.complex, k, &acc)
    }

    /// Ω_k coordinates of a chain, or `None` if it is not in Ω_k.
    pub fn omega_coordinates(&self, c: &Chain<F::Elem>) -> Option<SparseVec<F::Elem>> {
        if c.degree > self.top {
            return None;
        }
        let v = c.coordinates(&self.field, &self.complex)?;
        self.solvers[c.degree].solve(v)
    }

    pub fn betti_numbers(&self, up_to: usize) -> BettiNumbers {
        let up_to = up_to.min(self.top);
        let ranks: Vec<usize> = self.boundary.iter().map(|m| m.rank(&self.field)).collect();
        let mut values = Vec::new();
        for k in 0..=up_to {
            let next = if k < self.top { ranks[k + 1] } else { self.cap_rank.unwrap_or(0) };
            values.push(self.dim(k) - ranks[k] - next);
        }
        BettiNumbers { values, top_truncation_sensitive: up_to == self.top && self.cap_rank.is_none() }
    }
}

pub fn betti_numbers<F: Field>(rep: &ChainComplexRep<F>, up_to: usize) -> BettiNumbers {
    rep.betti_numbers(up_to)
}

/// Betti numbers of `dFl(g)` in degrees `0..=up_to`, exact in every degree.
pub fn flag_betti_numbers(g: &Digraph, up_to: usize, field: FieldSpec) -> Vec<usize> {
    let k = directed_flag_complex(g, up_to + 1);
    crate::with_field!(field, |f| omega_complex(&k, up_to, f).expect("flag complexes are regular").betti_numbers(up_to).values)
}

/// Betti numbers of the allowed-path complex `A(g)` in degrees `0..=up_to`.
pub fn allowed_betti_numbers(g: &Digraph, up_to: usize, field: FieldSpec) -> Vec<usize> {
    let a = allowed_path_complex(g, up_to + 1);
    crate::with_field!(field, |f| omega_complex(&a, up_to, f).expect("walk complexes are regular").betti_numbers(up_to).values)
}

/// Matrices of a chain map in Ω bases, one per degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<E> {
    pub matrices: Vec<SparseMatrix<E>>,
}

/// Matrices of `f_#` from `Ω(P1)` to `Ω(P2)` in degrees up to the smaller top.
pub fn induced_chain_map<F: Field>(
    f: &VertexMap,
    src: &ChainComplexRep<F>,
    dst: &ChainComplexRep<F>,
) -> Result<ChainMap<F::Elem>, ChainError> {
    match classify_path_morphism(f, &src.complex, &dst.complex) {
        Ok(PathMorphismClass::NotWeak) => {
            let (p, img) = crate::complexes::path_morphism_violation(f, &src.complex, &dst.complex).unwrap();
            return Err(ChainError::NotWeak(format!("{p} is sent to {img}")));
        }
        Err(e) => return Err(ChainError::DimensionMismatch(e.to_string())),
        Ok(_) => {}
    }
    let field = &src.field;
    let top = src.top.min(dst.top);
    let mut matrices = Vec::new();
    for k in 0..=top {
        let columns = (0..src.dim(k))
            .map(|i| {
                let img = push_forward(field, f, &src.basis_chain(k, i));
                dst.omega_coordinates(&img).ok_or(ChainError::NotInOmega(k))
            })
            .collect::<Result<Vec<_>, _>>()?;
        matrices.push(SparseMatrix { rows: dst.dim(k), columns });
    }
    Ok(ChainMap { matrices })
}

/// Matrix of the lifting map `Ω_k(P) → Ω_{k+1}(Cyl P)`; `cyl` must be built
/// over `cylinder(P)` to degree at least `k + 1`.
pub fn lifting_map<F: Field>(
    rep: &ChainComplexRep<F>,
    cyl: &ChainComplexRep<F>,
    k: usize,
) -> Result<SparseMatrix<F::Elem>, ChainError> {
    if cyl.complex.vertex_count() != 2 * rep.complex.vertex_count() {
        return Err(ChainError::DimensionMismatch("second complex is not a cylinder of the first".into()));
    }
    if k > rep.top || k + 1 > cyl.top {
        return Err(ChainError::TruncationBudget { top: k + 1, max_dim: cyl.top });
    }
    let columns = (0..rep.dim(k))
        .map(|i| {
            let l = lift(&rep.field, &rep.basis_chain(k, i));
            cyl.omega_coordinates(&l).ok_or(ChainError::NotInOmega(k + 1))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMatrix { rows: cyl.dim(k + 1), columns })
}

/// Chain homotopy `L_k: Ω_k(P1) → Ω_{k+1}(P2)` for `k = 0 … K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainHomotopy<E> {
    pub matrices: Vec<SparseMatrix<E>>,
}

/// Assemble `L = Σ α_i L^(i)` with `L^(i)_k(c) = F_i#(𝔏 c)` from a multi-step
/// witness whose maps go from `P1` to `P2`.
///
/// Each step is re-verified as a weak path morphism out of `Cyl(P1)`.
/// Degrees run up to `min(src.top, dst.top − 1)`.
pub fn chain_homotopy_from_witness<F: Field>(
    witness: &MultiStepWitness,
    src: &ChainComplexRep<F>,
    dst: &ChainComplexRep<F>,
) -> Result<ChainHomotopy<F::Elem>, ChainError> {
    let field = &src.field;
    let n1 = src.complex.vertex_count();
    if dst.top == 0 {
        return Err(ChainError::TruncationBudget { top: 1, max_dim: 0 });
    }
    let top = src.top.min(dst.top - 1);
    let cyl = cylinder(&src.complex);
    let mut total: Vec<SparseMatrix<F::Elem>> =
        (0..=top).map(|k| SparseMatrix::zero(dst.dim(k + 1), src.dim(k))).collect();
    for (index, step) in witness.steps().enumerate() {
        let (lower, upper) = step.lower_upper();
        if lower.source_count() != n1 || lower.target_count() != dst.complex.vertex_count() {
            return Err(ChainError::UnverifiableStep { index, reason: "map dimensions do not match".into() });
        }
        let image: Vec<usize> = (0..2 * n1).map(|u| if u % 2 == 0 { lower.apply(u / 2) } else { upper.apply(u / 2) }).collect();
        let big_f = VertexMap::new(image, lower.target_count()).unwrap();
        match classify_path_morphism(&big_f, &cyl, &dst.complex) {
            Ok(PathMorphismClass::NotWeak) | Err(_) => {
                return Err(ChainError::UnverifiableStep {
                    index,
                    reason: "cylinder map is not a weak path morphism".into(),
                })
            }
            Ok(_) => {}
        }
        let alpha = if step.forward { field.one() } else { field.neg(&field.one()) };
        for (k, acc) in total.iter_mut().enumerate() {
            let columns = (0..src.dim(k))
                .map(|i| {
                    let img = push_forward(field, &big_f, &lift(field, &src.basis_chain(k, i)));
                    dst.omega_coordinates(&img).ok_or(ChainError::UnverifiableStep {
                        index,
                        reason: format!("lift image leaves Ω_{}", k + 1),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let m = SparseMatrix { rows: dst.dim(k + 1), columns };
            *acc = acc.add_scaled(field, &alpha, &m);
        }
    }
    Ok(ChainHomotopy { matrices: total })
}

/// Check `∂L_k + L_{k−1}∂ = g_# − f_#` in every degree `L` covers.
pub fn homotopy_identity_holds<F: Field>(
    l: &ChainHomotopy<F::Elem>,
    f_sharp: &ChainMap<F::Elem>,
    g_sharp: &ChainMap<F::Elem>,
    src: &ChainComplexRep<F>,
    dst: &ChainComplexRep<F>,
) -> bool {
    let field = &src.field;
    for k in 0..l.matrices.len() {
        let mut lhs = dst.boundary(k + 1).compose(field, &l.matrices[k]);
        if k > 0 {
            lhs = lhs.add(field, &l.matrices[k - 1].compose(field, src.boundary(k)));
        }
        let rhs = g_sharp.matrices[k].sub(field, &f_sharp.matrices[k]);
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::rational::int;

    fn p(v: &[usize]) -> ElementaryPath {
        ElementaryPath::new(v.to_vec())
    }

    #[test]
    fn boundary_examples() {
        let f = Rationals;
        let d = regular_boundary(&f, &Chain::path(&f, p(&[0, 1, 2])));
        assert_eq!(d.terms.len(), 3);
        assert_eq!(d.terms[&p(&[1, 2])], int(1));
        assert_eq!(d.terms[&p(&[0, 2])], int(-1));
        assert_eq!(d.terms[&p(&[0, 1])], int(1));
        let d = regular_boundary(&f, &Chain::path(&f, p(&[0, 1, 0])));
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.terms[&p(&[1, 0])], int(1));
        assert_eq!(d.terms[&p(&[0, 1])], int(1));
        assert!(regular_boundary(&f, &d).is_zero());
    }

    #[test]
    fn omega_two_of_small_walks() {
        let open = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let rep = omega_complex(&allowed_path_complex(&open, 3), 2, Rationals).unwrap();
        assert_eq!(rep.dim(2), 0);
        let closed = Digraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let rep = omega_complex(&allowed_path_complex(&closed, 3), 2, Rationals).unwrap();
        assert_eq!(rep.dim(2), 1);
        assert_eq!(rep.basis_chain(2, 0), Chain::path(&Rationals, p(&[0, 1, 2])));
    }

    #[test]
    fn suspended_pair_betti() {
        let g = Digraph::new(4, &[(0, 1), (1, 0), (2, 0), (2, 1), (3, 0), (3, 1)]).unwrap();
        let k = directed_flag_complex(&g, 3);
        let b = omega_complex(&k, 2, Rationals).unwrap().betti_numbers(2);
        assert_eq!(b.values, vec![1, 0, 1]);
        assert!(!b.top_truncation_sensitive);
        let a = allowed_path_complex(&g, 3);
        assert_eq!(omega_complex(&a, 2, Rationals).unwrap().betti_numbers(2).values, vec![1, 0, 0]);
        let gf2 = PrimeField::new(2).unwrap();
        assert_eq!(omega_complex(&k, 2, gf2).unwrap().betti_numbers(2).values, vec![1, 0, 1]);
    }

    #[test]
    fn truncation_flag_and_budget() {
        let g = Digraph::complete(3);
        let a = allowed_path_complex(&g, 2);
        assert!(omega_complex(&a, 3, Rationals).is_err());
        let b = omega_complex(&a, 2, Rationals).unwrap().betti_numbers(2);
        assert!(b.top_truncation_sensitive);
    }

    #[test]
    fn lift_of_an_edge() {
        let f = Rationals;
        let l = lift(&f, &Chain::path(&f, p(&[0, 1])));
        assert_eq!(l.terms[&p(&[0, 1, 3])], int(1));
        assert_eq!(l.terms[&p(&[0, 2, 3])], int(-1));
        let l4 = lift(&f, &Chain::path(&f, p(&[0, 1, 2, 3, 4])));
        let signs: Vec<_> = (0..5).map(|i| l4.terms[&cylinder_lift_path(&[0, 1, 2, 3, 4], i)].clone()).collect();
        assert_eq!(signs, vec![int(1), int(-1), int(1), int(-1), int(1)]);
    }

    #[test]
    fn collapse_kills_edge() {
        let e = Digraph::new(2, &[(0, 1)]).unwrap();
        let src = omega_complex(&directed_flag_complex(&e, 2), 1, Rationals).unwrap();
        let dst = omega_complex(&directed_flag_complex(&Digraph::empty(1), 2), 1, Rationals).unwrap();
        let m = induced_chain_map(&VertexMap::constant(2, 1, 0), &src, &dst).unwrap();
        assert!(m.matrices[1].is_zero());
        assert_eq!(m.matrices[0].columns, vec![vec![(0, int(1))], vec![(0, int(1))]]);
    }
}
