//! Lattice-ordered monoid contract and the deterministic resource algebras.
//!
//! An [`Algebra`] bundles the neutral element, the monoid operation
//! (`combine`), the lattice meet and the compatible partial order. Elements
//! are plain values; the top element of the completion is carried separately
//! by [`Ext`] so that no algebra has to encode an infinite value.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("resource overflow: support of {len} points exceeds cap {cap}")]
    ResourceOverflow { len: usize, cap: usize },
    #[error("invalid resource: {0}")]
    Invalid(String),
}

/// Contract for a lattice-ordered monoid `(R, ⊕, ≼)`.
///
/// `combine` must be associative with `zero` as neutral element, the order
/// must be compatible with `combine` on both sides, and `meet` must return
/// the greatest lower bound.
pub trait Algebra: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn combine(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn less_eq(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    fn is_commutative(&self) -> bool {
        true
    }

    /// Whether `combine` distributes over `meet` on both sides.
    fn is_distributive(&self) -> bool;

    /// Checks that `x` belongs to this algebra (dimension, support cap...).
    fn validate(&self, _x: &Self::Elem) -> Result<(), AlgebraError> {
        Ok(())
    }

    /// `zero ≼ x` and `x ≠ zero`.
    fn is_positive(&self, x: &Self::Elem) -> bool {
        let zero = self.zero();
        self.less_eq(&zero, x) && *x != zero
    }

    fn checked_combine(
        &self,
        x: &Self::Elem,
        y: &Self::Elem,
    ) -> Result<Self::Elem, AlgebraError> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.combine(x, y))
    }

    fn checked_meet(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem, AlgebraError> {
        self.validate(x)?;
        self.validate(y)?;
        Ok(self.meet(x, y))
    }

    fn combine_ext(&self, x: &Ext<Self::Elem>, y: &Ext<Self::Elem>) -> Ext<Self::Elem> {
        match (x, y) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(self.combine(a, b)),
            _ => Ext::Top,
        }
    }

    fn meet_ext(&self, x: &Ext<Self::Elem>, y: &Ext<Self::Elem>) -> Ext<Self::Elem> {
        match (x, y) {
            (Ext::Finite(a), Ext::Finite(b)) => Ext::Finite(self.meet(a, b)),
            (Ext::Top, other) | (other, Ext::Top) => other.clone(),
        }
    }

    fn less_eq_ext(&self, x: &Ext<Self::Elem>, y: &Ext<Self::Elem>) -> bool {
        match (x, y) {
            (_, Ext::Top) => true,
            (Ext::Top, Ext::Finite(_)) => false,
            (Ext::Finite(a), Ext::Finite(b)) => self.less_eq(a, b),
        }
    }
}

/// An element of the completion: a finite resource or the top sentinel `⋁R`.
#[derive(Debug, Clone, PartialEq)]
pub enum Ext<E> {
    Finite(E),
    Top,
}

impl<E> Ext<E> {
    pub fn is_top(&self) -> bool {
        matches!(self, Ext::Top)
    }

    pub fn finite(&self) -> Option<&E> {
        match self {
            Ext::Finite(e) => Some(e),
            Ext::Top => None,
        }
    }
}

impl<E> From<E> for Ext<E> {
    fn from(e: E) -> Self {
        Ext::Finite(e)
    }
}

/// `(ℝ, +, ≤)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ScalarAlgebra;

impl Algebra for ScalarAlgebra {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn combine(&self, x: &f64, y: &f64) -> f64 {
        x + y
    }

    fn meet(&self, x: &f64, y: &f64) -> f64 {
        x.min(*y)
    }

    fn less_eq(&self, x: &f64, y: &f64) -> bool {
        x <= y
    }

    fn is_distributive(&self) -> bool {
        true
    }

    fn validate(&self, x: &f64) -> Result<(), AlgebraError> {
        if x.is_nan() {
            return Err(AlgebraError::Invalid("NaN scalar".into()));
        }
        Ok(())
    }
}

/// Fixed-length real vector `(w⁰, …, wᵏ)`. Component 0 is the cost weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn new(components: Vec<f64>) -> Self {
        Vector(components)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

/// `(ℝᵈ, +, ≤)` with componentwise operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorAlgebra {
    pub dim: usize,
}

impl VectorAlgebra {
    pub fn new(dim: usize) -> Self {
        VectorAlgebra { dim }
    }
}

impl Algebra for VectorAlgebra {
    type Elem = Vector;

    fn zero(&self) -> Vector {
        Vector(vec![0.0; self.dim])
    }

    fn combine(&self, x: &Vector, y: &Vector) -> Vector {
        debug_assert_eq!(x.len(), y.len());
        Vector(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    fn meet(&self, x: &Vector, y: &Vector) -> Vector {
        debug_assert_eq!(x.len(), y.len());
        Vector(x.0.iter().zip(&y.0).map(|(a, b)| a.min(*b)).collect())
    }

    fn less_eq(&self, x: &Vector, y: &Vector) -> bool {
        debug_assert_eq!(x.len(), y.len());
        x.0.iter().zip(&y.0).all(|(a, b)| a <= b)
    }

    fn is_distributive(&self) -> bool {
        true
    }

    fn validate(&self, x: &Vector) -> Result<(), AlgebraError> {
        if x.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        if x.0.iter().any(|v| v.is_nan()) {
            return Err(AlgebraError::Invalid("NaN component".into()));
        }
        Ok(())
    }
}

/// Product of two algebras with componentwise sum, meet and order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAlgebra<L, R> {
    pub left: L,
    pub right: R,
}

impl<L, R> ProductAlgebra<L, R> {
    pub fn new(left: L, right: R) -> Self {
        ProductAlgebra { left, right }
    }
}

impl<L: Algebra, R: Algebra> Algebra for ProductAlgebra<L, R> {
    type Elem = (L::Elem, R::Elem);

    fn zero(&self) -> Self::Elem {
        (self.left.zero(), self.right.zero())
    }

    fn combine(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (
            self.left.combine(&x.0, &y.0),
            self.right.combine(&x.1, &y.1),
        )
    }

    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (self.left.meet(&x.0, &y.0), self.right.meet(&x.1, &y.1))
    }

    fn less_eq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.left.less_eq(&x.0, &y.0) && self.right.less_eq(&x.1, &y.1)
    }

    fn is_commutative(&self) -> bool {
        self.left.is_commutative() && self.right.is_commutative()
    }

    fn is_distributive(&self) -> bool {
        self.left.is_distributive() && self.right.is_distributive()
    }

    fn validate(&self, x: &Self::Elem) -> Result<(), AlgebraError> {
        self.left.validate(&x.0)?;
        self.right.validate(&x.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector {
        Vector(c.to_vec())
    }

    #[test]
    fn vector_combine_is_componentwise() {
        let alg = VectorAlgebra::new(3);
        assert_eq!(
            alg.combine(&v(&[1.0, 2.0, 3.0]), &v(&[4.0, 5.0, 6.0])),
            v(&[5.0, 7.0, 9.0])
        );
    }

    #[test]
    fn scalar_neutral_and_min() {
        let alg = ScalarAlgebra;
        assert_eq!(alg.combine(&alg.zero(), &7.0), 7.0);
        assert_eq!(alg.meet(&2.0, &5.0), 2.0);
    }

    #[test]
    fn product_combine() {
        let alg = ProductAlgebra::new(VectorAlgebra::new(1), VectorAlgebra::new(2));
        let x = (v(&[2.0]), v(&[1.0, 1.0]));
        let y = (v(&[3.0]), v(&[0.0, 4.0]));
        assert_eq!(alg.combine(&x, &y), (v(&[5.0]), v(&[1.0, 5.0])));
    }

    #[test]
    fn meet_and_order_examples() {
        let alg = VectorAlgebra::new(2);
        assert_eq!(alg.meet(&v(&[1.0, 5.0]), &v(&[2.0, 1.0])), v(&[1.0, 1.0]));
        assert_eq!(
            alg.meet_ext(&Ext::Top, &Ext::Finite(v(&[3.0, 4.0]))),
            Ext::Finite(v(&[3.0, 4.0]))
        );
        assert!(alg.less_eq(&v(&[1.0, 1.0]), &v(&[2.0, 1.0])));
        assert!(!alg.less_eq(&v(&[1.0, 5.0]), &v(&[2.0, 1.0])));
        assert!(alg.less_eq(&v(&[1.0, 5.0]), &v(&[1.0, 5.0])));
    }

    #[test]
    fn positivity() {
        let alg = VectorAlgebra::new(2);
        assert!(alg.is_positive(&v(&[1.0, 0.0])));
        assert!(!alg.is_positive(&v(&[0.0, 0.0])));
        assert!(!alg.is_positive(&v(&[1.0, -1.0])));
    }

    #[test]
    fn top_saturates_and_absorbs() {
        let alg = VectorAlgebra::new(2);
        let x = Ext::Finite(v(&[1.0, 2.0]));
        assert_eq!(alg.combine_ext(&x, &Ext::Top), Ext::Top);
        assert_eq!(alg.combine_ext(&Ext::Top, &x), Ext::Top);
        assert!(alg.less_eq_ext(&x, &Ext::Top));
        assert!(!alg.less_eq_ext(&Ext::Top, &x));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let alg = VectorAlgebra::new(2);
        let err = alg
            .checked_combine(&v(&[1.0, 2.0]), &v(&[1.0, 2.0, 3.0]))
            .unwrap_err();
        assert_eq!(
            err,
            AlgebraError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        );
        assert!(alg.checked_meet(&v(&[1.0]), &v(&[1.0, 2.0])).is_err());
    }

    fn int_vec(dim: usize) -> impl Strategy<Value = Vector> {
        proptest::collection::vec(-50i32..50, dim)
            .prop_map(|c| Vector(c.into_iter().map(f64::from).collect()))
    }

    proptest! {
        #[test]
        fn vector_laws(x in int_vec(3), y in int_vec(3), z in int_vec(3)) {
            let alg = VectorAlgebra::new(3);
            prop_assert_eq!(
                alg.combine(&alg.combine(&x, &y), &z),
                alg.combine(&x, &alg.combine(&y, &z))
            );
            prop_assert_eq!(alg.combine(&alg.zero(), &x), x.clone());
            prop_assert_eq!(alg.combine(&x, &alg.zero()), x.clone());
            let m = alg.meet(&x, &y);
            prop_assert!(alg.less_eq(&m, &x) && alg.less_eq(&m, &y));
            if alg.less_eq(&z, &x) && alg.less_eq(&z, &y) {
                prop_assert!(alg.less_eq(&z, &m));
            }
            // distributivity on both sides
            prop_assert_eq!(
                alg.combine(&x, &alg.meet(&y, &z)),
                alg.meet(&alg.combine(&x, &y), &alg.combine(&x, &z))
            );
            prop_assert_eq!(
                alg.combine(&alg.meet(&y, &z), &x),
                alg.meet(&alg.combine(&y, &x), &alg.combine(&z, &x))
            );
            let lo = alg.meet(&x, &y);
            prop_assert!(alg.less_eq(&alg.combine(&z, &lo), &alg.combine(&z, &x)));
            prop_assert!(alg.less_eq(&alg.combine(&lo, &z), &alg.combine(&x, &z)));
        }

        #[test]
        fn order_is_antisymmetric_and_transitive(x in int_vec(2), y in int_vec(2), z in int_vec(2)) {
            let alg = VectorAlgebra::new(2);
            if alg.less_eq(&x, &y) && alg.less_eq(&y, &x) {
                prop_assert_eq!(&x, &y);
            }
            if alg.less_eq(&x, &y) && alg.less_eq(&y, &z) {
                prop_assert!(alg.less_eq(&x, &z));
            }
        }

        #[test]
        fn product_order_is_componentwise(a in int_vec(1), b in int_vec(2), c in int_vec(1), d in int_vec(2)) {
            let alg = ProductAlgebra::new(VectorAlgebra::new(1), VectorAlgebra::new(2));
            let x = (a.clone(), b.clone());
            let y = (c.clone(), d.clone());
            prop_assert_eq!(
                alg.less_eq(&x, &y),
                alg.left.less_eq(&a, &c) && alg.right.less_eq(&b, &d)
            );
            prop_assert_eq!(alg.meet(&x, &y), (alg.left.meet(&a, &c), alg.right.meet(&b, &d)));
        }
    }
}
