//! Matrix tuples under simultaneous conjugation.
//!
//! For a tuple `M = (M_0, …, M_{r−1})` let `M(x) = Σ_j M_j x^j` and
//! `f_ℓ(M, x) = tr(M(x_1) ⋯ M(x_ℓ))`. The coefficient of `x^i` in `f_ℓ` is
//! the word trace `tr(M_{i_1} ⋯ M_{i_ℓ})`, so two tuples have intersecting
//! orbit closures iff `f_ℓ(A, x) = f_ℓ(B, x)` for every `ℓ ≤ n²`.

use num_traits::{One, Zero};

use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{det_division_free, inverse, nullspace_basis, Matrix, Monomial};
use crate::branching::{Abp, AffineForm, Roabp, RoabpLayer};
use crate::error::{Error, Result};
use crate::pit::{
    find_nonzero_point, schwartz_zippel_zero_test, whitebox_roabp_zero_test, HittingSet, SzConfig,
    Witness,
};

/// Largest number of words [`trace_word_oracle`] will enumerate.
pub const WORD_CAP: u128 = 1 << 20;

/// `r >= 1` square matrices of a common size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTuple {
    n: usize,
    matrices: Vec<Matrix<Scalar>>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<Matrix<Scalar>>) -> Result<Self> {
        let first = matrices.first().ok_or(Error::EmptyInput("matrix tuple"))?;
        let n = first.rows();
        for m in &matrices {
            if m.rows() != n || m.cols() != n {
                return Err(Error::dimension(
                    "tuple matrix",
                    format!("{n}x{n}"),
                    format!("{}x{}", m.rows(), m.cols()),
                ));
            }
        }
        Ok(MatrixTuple { n, matrices })
    }

    /// The one-element tuple `(I_n)`.
    pub fn identity(n: usize) -> MatrixTuple {
        MatrixTuple {
            n,
            matrices: vec![Matrix::identity(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix<Scalar>] {
        &self.matrices
    }

    /// Errors unless both tuples have the same `(n, r)`.
    pub fn check_compatible(&self, other: &MatrixTuple) -> Result<()> {
        if (self.n, self.r()) != (other.n, other.r()) {
            return Err(Error::dimension(
                "matrix tuple (n, r)",
                format!("({}, {})", self.n, self.r()),
                format!("({}, {})", other.n, other.r()),
            ));
        }
        Ok(())
    }

    /// All entries as one point: `M_j[p][q]` sits at index `j·n² + p·n + q`.
    pub fn entry_point(&self) -> Vec<Scalar> {
        self.matrices
            .iter()
            .flat_map(|m| m.entries().iter().cloned())
            .collect()
    }

    /// `(P M_0 P⁻¹, …)`; errors if `P` is singular or the wrong size.
    pub fn conjugate(&self, p: &Matrix<Scalar>) -> Result<MatrixTuple> {
        let p_inv =
            inverse(p)?.ok_or_else(|| Error::Parameter("conjugating matrix is singular".into()))?;
        let matrices = self
            .matrices
            .iter()
            .map(|m| p.matmul(m)?.matmul(&p_inv))
            .collect::<Result<_>>()?;
        Ok(MatrixTuple {
            n: self.n,
            matrices,
        })
    }

    /// `M(x) = Σ_j M_j x^j`.
    pub fn pencil_at(&self, x: &Scalar) -> Matrix<Scalar> {
        let mut acc = self.matrices[self.r() - 1].clone();
        for m in self.matrices.iter().rev().skip(1) {
            acc = acc.scale(x).add(m).expect("tuple matrices share a shape");
        }
        acc
    }
}

/// `f_ℓ(A, α) = tr(A(α_1) ⋯ A(α_ℓ))`, by direct multiplication.
pub fn f_ell_value(a: &MatrixTuple, alpha: &[Scalar]) -> Result<Scalar> {
    if alpha.is_empty() {
        return Err(Error::EmptyInput("evaluation point of f_ell"));
    }
    let mats: Vec<Matrix<Scalar>> = alpha.iter().map(|x| a.pencil_at(x)).collect();
    Matrix::product(&mats)?.trace()
}

/// ROABP of width at most `n²`, depth `ℓ` and degree bound `r` computing
/// `f_ℓ(A, x)`: one program per diagonal entry of the product, summed.
pub fn build_f_ell_roabp(a: &MatrixTuple, ell: usize) -> Result<Roabp> {
    if ell == 0 {
        return Err(Error::Parameter("word length must be at least 1".into()));
    }
    let mats = a.matrices();
    let mut total: Option<Roabp> = None;
    for i in 0..a.n() {
        let layers = if ell == 1 {
            vec![RoabpLayer::new(
                mats.iter()
                    .map(|m| Matrix::from_fn(1, 1, |_, _| m.get(i, i).clone()))
                    .collect(),
            )?]
        } else {
            let mut layers = vec![RoabpLayer::new(
                mats.iter().map(|m| m.row_matrix(i)).collect(),
            )?];
            let full = RoabpLayer::new(mats.to_vec())?;
            layers.extend(std::iter::repeat_n(full, ell - 2));
            layers.push(RoabpLayer::new(
                mats.iter().map(|m| m.col_matrix(i)).collect(),
            )?);
            layers
        };
        let diag = Roabp::new(layers)?;
        total = Some(match total {
            None => diag,
            Some(acc) => acc.add(&diag)?,
        });
    }
    Ok(total.expect("tuple matrices are non-empty"))
}

/// `f_ℓ(A, x) − f_ℓ(B, x)` as a ROABP of width at most `2n²`.
pub fn diff_roabp(a: &MatrixTuple, b: &MatrixTuple, ell: usize) -> Result<Roabp> {
    a.check_compatible(b)?;
    build_f_ell_roabp(a, ell)?.sub(&build_f_ell_roabp(b, ell)?)
}

/// ABP over the `n²r` entry variables of a generic tuple `M` computing
/// `f_ℓ(M, α)`: width at most `n²`, depth `ℓ`, layer `i` holding `M(α_i)`.
pub fn invariant_abp(alpha: &[Scalar], ell: usize, n: usize, r: usize) -> Result<Abp> {
    if ell == 0 {
        return Err(Error::Parameter("word length must be at least 1".into()));
    }
    if alpha.len() < ell {
        return Err(Error::dimension(
            "invariant point",
            format!("at least {ell}"),
            alpha.len(),
        ));
    }
    if n == 0 || r == 0 {
        return Err(Error::Parameter(
            "tuple size and length must be positive".into(),
        ));
    }
    let nvars = n * n * r;
    let generic = |x: &Scalar| -> Matrix<AffineForm> {
        let powers: Vec<Scalar> = (0..r as u32).map(|j| scalar::pow(x, j)).collect();
        Matrix::from_fn(n, n, |p, q| {
            AffineForm::new(
                Scalar::zero(),
                powers
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j * n * n + p * n + q, c.clone())),
            )
        })
    };
    let layers_full: Vec<Matrix<AffineForm>> = alpha[..ell].iter().map(generic).collect();
    let mut total: Option<Abp> = None;
    for i in 0..n {
        let layers = if ell == 1 {
            vec![Matrix::from_fn(1, 1, |_, _| {
                layers_full[0].get(i, i).clone()
            })]
        } else {
            let mut layers = vec![layers_full[0].row_matrix(i)];
            layers.extend(layers_full[1..ell - 1].iter().cloned());
            layers.push(layers_full[ell - 1].col_matrix(i));
            layers
        };
        let diag = Abp::new(nvars, layers)?;
        total = Some(match total {
            None => diag,
            Some(acc) => acc.add(&diag)?,
        });
    }
    Ok(total.expect("n is positive"))
}

/// True iff every word trace of length at most `max_ell` agrees.
pub fn trace_word_oracle(a: &MatrixTuple, b: &MatrixTuple, max_ell: usize) -> Result<bool> {
    a.check_compatible(b)?;
    let r = a.r() as u128;
    let words = (1..=max_ell as u32).try_fold(0u128, |acc, l| {
        r.checked_pow(l).and_then(|c| acc.checked_add(c))
    });
    match words {
        Some(w) if w <= WORD_CAP => {}
        _ => {
            return Err(Error::Size {
                what: "word-trace enumeration",
                size: words.unwrap_or(u128::MAX),
                cap: WORD_CAP,
            })
        }
    }
    if max_ell == 0 {
        return Ok(true);
    }
    let pa = Matrix::identity(a.n());
    let pb = Matrix::identity(b.n());
    words_agree(a, b, &pa, &pb, max_ell)
}

fn words_agree(
    a: &MatrixTuple,
    b: &MatrixTuple,
    pa: &Matrix<Scalar>,
    pb: &Matrix<Scalar>,
    remaining: usize,
) -> Result<bool> {
    for (ma, mb) in a.matrices().iter().zip(b.matrices()) {
        let qa = pa.matmul(ma)?;
        let qb = pb.matmul(mb)?;
        if qa.trace()? != qb.trace()? {
            return Ok(false);
        }
        if remaining > 1 && !words_agree(a, b, &qa, &qb, remaining - 1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Intersecting,
    Disjoint,
    Member,
    NonMember,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    Whitebox,
    /// Comparison of an explicit separating family.
    Blackbox,
    Randomized {
        failure_bound: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitWitness {
    /// `f_ℓ(A, point) ≠ f_ℓ(B, point)`.
    Separating {
        ell: usize,
        point: Vec<Scalar>,
        monomial: Option<Monomial>,
        value_a: Scalar,
        value_b: Scalar,
    },
    /// `B_j = P A_j P⁻¹` for every `j`.
    Conjugator { p: Matrix<Scalar> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitVerdict {
    pub decision: Decision,
    pub witness: Option<OrbitWitness>,
    pub method: Method,
}

/// Options for [`orbit_closure_intersects`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Tests `ℓ = 1, …, max_ell` instead of up to `n²`.
    pub max_ell: Option<usize>,
}

/// Decides whether the orbit closures of `A` and `B` meet by white-box zero
/// tests of `f_ℓ(A, x) − f_ℓ(B, x)` for `ℓ = 1, …, n²`.
pub fn orbit_closure_intersects(
    a: &MatrixTuple,
    b: &MatrixTuple,
    options: ClosureOptions,
) -> Result<OrbitVerdict> {
    a.check_compatible(b)?;
    let max_ell = options.max_ell.unwrap_or(a.n() * a.n());
    for ell in 1..=max_ell {
        let diff = diff_roabp(a, b, ell)?;
        let verdict = whitebox_roabp_zero_test(&diff);
        if verdict.is_zero {
            continue;
        }
        let monomial = match verdict.witness {
            Some(Witness::Monomial { monomial, .. }) => Some(monomial),
            _ => None,
        };
        let (point, _) = find_nonzero_point(&diff)?.expect("nonzero verdict has a point");
        let value_a = f_ell_value(a, &point)?;
        let value_b = f_ell_value(b, &point)?;
        debug_assert_ne!(value_a, value_b);
        return Ok(OrbitVerdict {
            decision: Decision::Disjoint,
            witness: Some(OrbitWitness::Separating {
                ell,
                point,
                monomial,
                value_a,
                value_b,
            }),
            method: Method::Whitebox,
        });
    }
    Ok(OrbitVerdict {
        decision: Decision::Intersecting,
        witness: None,
        method: Method::Whitebox,
    })
}

/// The invariant `f_ℓ(M, α)` with its explicit ABP over the entry variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantDescriptor {
    pub ell: usize,
    pub alpha: Vec<Scalar>,
    pub realization: Abp,
}

impl InvariantDescriptor {
    pub fn new(alpha: Vec<Scalar>, ell: usize, n: usize, r: usize) -> Result<Self> {
        let realization = invariant_abp(&alpha, ell, n, r)?;
        Ok(InvariantDescriptor {
            ell,
            alpha,
            realization,
        })
    }

    pub fn eval(&self, tuple: &MatrixTuple) -> Result<Scalar> {
        self.realization.eval(&tuple.entry_point())
    }
}

/// `{ f_ℓ(M, α) : α ∈ H, ℓ ∈ [n²] }`, ordered by point then `ℓ`. Points
/// narrower than `n²` are zero-padded.
pub fn separating_family(n: usize, r: usize, h: &HittingSet) -> Result<Vec<InvariantDescriptor>> {
    let n2 = n * n;
    let h = if h.arity() < n2 {
        h.zero_padded(n2)?
    } else {
        h.clone()
    };
    let mut family = Vec::with_capacity(n2 * h.len());
    for alpha in h.points() {
        for ell in 1..=n2 {
            family.push(InvariantDescriptor::new(alpha.clone(), ell, n, r)?);
        }
    }
    Ok(family)
}

/// First member of `family` taking different values on `a` and `b`.
pub fn separates<'f>(
    a: &MatrixTuple,
    b: &MatrixTuple,
    family: &'f [InvariantDescriptor],
) -> Result<Option<&'f InvariantDescriptor>> {
    a.check_compatible(b)?;
    for inv in family {
        if inv.eval(a)? != inv.eval(b)? {
            return Ok(Some(inv));
        }
    }
    Ok(None)
}

/// Closure intersection decided by comparing the family built from `h`.
pub fn orbit_closure_blackbox(
    a: &MatrixTuple,
    b: &MatrixTuple,
    h: &HittingSet,
) -> Result<OrbitVerdict> {
    a.check_compatible(b)?;
    let family = separating_family(a.n(), a.r(), h)?;
    Ok(match separates(a, b, &family)? {
        None => OrbitVerdict {
            decision: Decision::Intersecting,
            witness: None,
            method: Method::Blackbox,
        },
        Some(inv) => OrbitVerdict {
            decision: Decision::Disjoint,
            witness: Some(OrbitWitness::Separating {
                ell: inv.ell,
                point: inv.alpha[..inv.ell].to_vec(),
                monomial: None,
                value_a: inv.eval(a)?,
                value_b: inv.eval(b)?,
            }),
            method: Method::Blackbox,
        },
    })
}

/// Linear system `B_j P − P A_j = 0` in the `n²` entries of `P` (row-major).
pub fn intertwiner_system(a: &MatrixTuple, b: &MatrixTuple) -> Result<Matrix<Scalar>> {
    a.check_compatible(b)?;
    let n = a.n();
    let n2 = n * n;
    let mut sys = Matrix::zeros(a.r() * n2, n2);
    for (j, (ma, mb)) in a.matrices().iter().zip(b.matrices()).enumerate() {
        for s in 0..n {
            for t in 0..n {
                let row = j * n2 + s * n + t;
                for p in 0..n {
                    *sys.get_mut(row, p * n + t) += mb.get(s, p);
                }
                for q in 0..n {
                    *sys.get_mut(row, s * n + q) -= ma.get(q, t);
                }
            }
        }
    }
    Ok(sys)
}

/// Randomized orbit membership: `B` is conjugate to `A` iff the pencil
/// `Σ x_i P_i` over a basis of `{ P : B P = P A }` has a nonzero determinant.
///
/// A member verdict carries an exactly verified conjugator and failure
/// bound 0; a non-member verdict from a nonempty solution space carries the
/// Schwartz–Zippel bound.
pub fn orbit_member(
    a: &MatrixTuple,
    b: &MatrixTuple,
    seed: u64,
    trials: u32,
) -> Result<OrbitVerdict> {
    let sys = intertwiner_system(a, b)?;
    let n = a.n();
    let basis: Vec<Matrix<Scalar>> = nullspace_basis(&sys)
        .into_iter()
        .map(|v| Matrix::from_vec(n, n, v))
        .collect::<Result<_>>()?;
    let certain = Method::Randomized {
        failure_bound: Scalar::zero(),
    };
    if basis.is_empty() {
        return Ok(OrbitVerdict {
            decision: Decision::NonMember,
            witness: None,
            method: certain,
        });
    }
    let pencil = |x: &[Scalar]| -> Matrix<Scalar> {
        basis
            .iter()
            .zip(x)
            .fold(Matrix::zeros(n, n), |acc, (p, c)| {
                acc.add(&p.scale(c)).expect("basis matrices are n x n")
            })
    };
    let config = SzConfig::new(n as u64, trials, seed);
    let verdict =
        schwartz_zippel_zero_test(|x| det_division_free(&pencil(x)), basis.len(), &config)?;
    match verdict.witness {
        Some(Witness::Point { point, .. }) => {
            let p = pencil(&point);
            if b != &a.conjugate(&p)? {
                return Err(Error::Parameter(
                    "pencil point failed exact conjugation check".into(),
                ));
            }
            Ok(OrbitVerdict {
                decision: Decision::Member,
                witness: Some(OrbitWitness::Conjugator { p }),
                method: certain,
            })
        }
        _ => Ok(OrbitVerdict {
            decision: Decision::NonMember,
            witness: None,
            method: Method::Randomized {
                failure_bound: config.failure_bound(),
            },
        }),
    }
}

/// Checks `B_j = P A_j P⁻¹` exactly for every `j`.
pub fn conjugates(a: &MatrixTuple, b: &MatrixTuple, p: &Matrix<Scalar>) -> bool {
    a.check_compatible(b).is_ok()
        && p.rows() == a.n()
        && p.cols() == a.n()
        && !det_division_free(p).map_or(true, |d| d.is_zero())
        && a.conjugate(p).is_ok_and(|c| &c == b)
}

/// Identity-padded ROABP depth, for callers needing uniform depth.
pub fn padded_diff_roabp(a: &MatrixTuple, b: &MatrixTuple, ell: usize) -> Result<Roabp> {
    Ok(diff_roabp(a, b, ell)?.pad_depth(a.n() * a.n()))
}

impl OrbitVerdict {
    /// `1 − failure bound` for randomized verdicts, 1 otherwise.
    pub fn confidence(&self) -> Scalar {
        match &self.method {
            Method::Randomized { failure_bound } => Scalar::one() - failure_bound,
            _ => Scalar::one(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::algebra::SparsePoly;
    use crate::pit::grid_hitting_set;

    fn tuple(mats: &[&[i64]], n: usize) -> MatrixTuple {
        MatrixTuple::new(
            mats.iter()
                .map(|v| Matrix::from_ints(n, n, v).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn unipotent() -> MatrixTuple {
        tuple(&[&[1, 1, 0, 1]], 2)
    }

    #[test]
    fn scalar_tuple_f1() {
        let a = tuple(&[&[3], &[5]], 1);
        let p = build_f_ell_roabp(&a, 1).unwrap();
        let x = SparsePoly::var(0, 1);
        assert_eq!(
            p.expand(),
            x.scale(&int(5)) + SparsePoly::constant(int(3), 1)
        );
    }

    #[test]
    fn identity_tuple_trace() {
        let p = build_f_ell_roabp(&MatrixTuple::identity(2), 2).unwrap();
        assert_eq!(p.expand(), SparsePoly::constant(int(2), 2));
        assert!(p.width() <= 4);
    }

    #[test]
    fn unipotent_and_identity_share_invariants() {
        let b = MatrixTuple::identity(2);
        for ell in 1..=4 {
            assert!(diff_roabp(&unipotent(), &b, ell)
                .unwrap()
                .expand()
                .is_zero());
        }
        let v = orbit_closure_intersects(&unipotent(), &b, ClosureOptions::default()).unwrap();
        assert_eq!(v.decision, Decision::Intersecting);
        let m = orbit_member(&unipotent(), &b, 1, 10).unwrap();
        assert_eq!(m.decision, Decision::NonMember);
    }

    #[test]
    fn diagonal_pair_is_disjoint_at_length_one() {
        let a = tuple(&[&[1, 0, 0, 2]], 2);
        let b = tuple(&[&[1, 0, 0, 3]], 2);
        assert_eq!(
            diff_roabp(&a, &b, 1).unwrap().expand(),
            SparsePoly::constant(int(-1), 1)
        );
        let v = orbit_closure_intersects(&a, &b, ClosureOptions::default()).unwrap();
        assert_eq!(v.decision, Decision::Disjoint);
        let Some(OrbitWitness::Separating {
            ell,
            value_a,
            value_b,
            ..
        }) = v.witness
        else {
            panic!("expected a separating witness");
        };
        assert_eq!((ell, value_a, value_b), (1, int(3), int(4)));
        assert!(!trace_word_oracle(&a, &b, 1).unwrap());
    }

    #[test]
    fn self_membership() {
        let a = tuple(&[&[1, 2, 3, 4], &[0, 1, -1, 2]], 2);
        let v = orbit_member(&a, &a, 3, 10).unwrap();
        assert_eq!(v.decision, Decision::Member);
        let Some(OrbitWitness::Conjugator { p }) = v.witness else {
            panic!("expected a conjugator");
        };
        assert!(conjugates(&a, &a, &p));
    }

    #[test]
    fn scalar_invariant_abp() {
        let c = int(7);
        let p = invariant_abp(std::slice::from_ref(&c), 1, 1, 2).unwrap();
        let expected = SparsePoly::var(0, 2) + SparsePoly::var(1, 2).scale(&c);
        assert_eq!(p.expand(), expected);
    }

    #[test]
    fn family_size() {
        let h = grid_hitting_set(1, 0).unwrap();
        let fam = separating_family(2, 1, &h).unwrap();
        assert_eq!(fam.len(), 4);
        let empty =
            HittingSet::new(4, vec![], crate::pit::Provenance::File { path: "x".into() }).unwrap();
        assert!(separating_family(2, 2, &empty).unwrap().is_empty());
    }

    #[test]
    fn shape_mismatch() {
        let a = tuple(&[&[1]], 1);
        let b = MatrixTuple::identity(2);
        assert!(matches!(
            orbit_closure_intersects(&a, &b, ClosureOptions::default()),
            Err(Error::Dimension { .. })
        ));
    }
}
