//! Finite abelian groups given as products of cyclic factors.
//!
//! Elements are encoded as integers in `[0, order)` using a mixed-radix
//! representation with the first factor as the least significant digit.
//! For `ElementaryTwo` this coincides with the bit pattern, so addition is XOR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { order: usize },
    ElementaryTwo { rank: u32 },
    Product { orders: Vec<usize> },
}

impl GroupSpec {
    pub fn cyclic(order: usize) -> Self {
        GroupSpec::Cyclic { order }
    }

    pub fn elementary_two(rank: u32) -> Self {
        GroupSpec::ElementaryTwo { rank }
    }

    pub fn product(orders: Vec<usize>) -> Self {
        GroupSpec::Product { orders }
    }

    /// Radices of the cyclic factors, least significant first.
    pub fn radices(&self) -> Vec<usize> {
        match self {
            GroupSpec::Cyclic { order } => vec![*order],
            GroupSpec::ElementaryTwo { rank } => vec![2; *rank as usize],
            GroupSpec::Product { orders } => orders.clone(),
        }
    }

    pub fn order(&self) -> usize {
        self.radices().iter().product()
    }

    pub fn validate(&self) -> Result<()> {
        let radices = self.radices();
        if radices.is_empty() || radices.iter().any(|&r| r < 2) {
            return Err(Error::Parameter(format!(
                "group factors must all be at least 2, got {radices:?}"
            )));
        }
        let order = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::SizeLimit("group order overflows".into()))?;
        if order > u32::MAX as usize {
            return Err(Error::SizeLimit(format!("group order {order} too large")));
        }
        Ok(())
    }

    /// True when every element is its own inverse.
    pub fn is_elementary_two(&self) -> bool {
        self.radices().iter().all(|&r| r == 2)
    }

    pub fn label(&self) -> String {
        match self {
            GroupSpec::Cyclic { order } => format!("Z{order}"),
            GroupSpec::ElementaryTwo { rank } => format!("Z2^{rank}"),
            GroupSpec::Product { orders } => orders
                .iter()
                .map(|o| format!("Z{o}"))
                .collect::<Vec<_>>()
                .join("x"),
        }
    }
}

/// Arithmetic view of a validated [`GroupSpec`].
#[derive(Clone, Debug)]
pub struct Group {
    spec: GroupSpec,
    radices: Vec<usize>,
    order: usize,
    shape: Shape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Cyclic,
    Xor,
    Mixed,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        spec.validate()?;
        let radices = spec.radices();
        let order = radices.iter().product();
        let shape = if radices.len() == 1 {
            Shape::Cyclic
        } else if radices.iter().all(|&r| r == 2) {
            Shape::Xor
        } else {
            Shape::Mixed
        };
        Ok(Group { spec, radices, order, shape })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_elementary_two(&self) -> bool {
        self.radices.iter().all(|&r| r == 2)
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match self.shape {
            Shape::Cyclic => {
                let s = a + b;
                if s >= self.order {
                    s - self.order
                } else {
                    s
                }
            }
            Shape::Xor => a ^ b,
            Shape::Mixed => self.digitwise(a, b, |x, y, r| (x + y) % r),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        match self.shape {
            Shape::Cyclic => (self.order - a) % self.order,
            Shape::Xor => a,
            Shape::Mixed => self.digitwise(a, 0, |x, _, r| (r - x) % r),
        }
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    fn digitwise(&self, a: usize, b: usize, op: impl Fn(usize, usize, usize) -> usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for &r in &self.radices {
            out += op(a % r, b % r, r) * place;
            a /= r;
            b /= r;
            place *= r;
        }
        out
    }

    /// Digits of an element, least significant factor first.
    pub fn digits(&self, mut a: usize) -> Vec<usize> {
        self.radices
            .iter()
            .map(|&r| {
                let d = a % r;
                a /= r;
                d
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let g = Group::new(GroupSpec::cyclic(7)).unwrap();
        assert_eq!(g.add(5, 4), 2);
        assert_eq!(g.neg(3), 4);
        assert_eq!(g.sub(1, 3), 5);
        assert_eq!(g.neg(0), 0);
    }

    #[test]
    fn elementary_two_is_xor() {
        let g = Group::new(GroupSpec::elementary_two(3)).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(g.add(a, b), a ^ b);
            }
            assert_eq!(g.neg(a), a);
        }
    }

    #[test]
    fn product_matches_componentwise() {
        let g = Group::new(GroupSpec::product(vec![3, 4])).unwrap();
        assert_eq!(g.order(), 12);
        for a in 0..12 {
            for b in 0..12 {
                let (da, db) = (g.digits(a), g.digits(b));
                let s = g.digits(g.add(a, b));
                assert_eq!(s, vec![(da[0] + db[0]) % 3, (da[1] + db[1]) % 4]);
            }
            assert_eq!(g.add(a, g.neg(a)), 0);
        }
    }

    #[test]
    fn rejects_trivial_factors() {
        assert!(Group::new(GroupSpec::cyclic(1)).is_err());
        assert!(Group::new(GroupSpec::product(vec![])).is_err());
        assert!(Group::new(GroupSpec::product(vec![2, 1])).is_err());
    }
}
