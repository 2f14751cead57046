//! Permutations of `{0, …, degree-1}`, the carriers for group elements.

use std::fmt;

use crate::group::GroupError;

/// A permutation stored as its image sequence: `images[i]` is where point `i` goes.
///
/// The derived `Ord` is lexicographic on image sequences, which is the canonical
/// element order used everywhere downstream (the identity sorts first).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from an image sequence, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(GroupError::InvalidPermutation);
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut p = Permutation::identity(degree);
        for cycle in cycles {
            let mut images: Vec<usize> = (0..degree).collect();
            let mut touched = vec![false; degree];
            for (k, &pt) in cycle.iter().enumerate() {
                if pt >= degree {
                    return Err(GroupError::PointOutOfRange { point: pt, degree });
                }
                if touched[pt] {
                    return Err(GroupError::InvalidPermutation);
                }
                touched[pt] = true;
                images[pt] = cycle[(k + 1) % cycle.len()];
            }
            let c = Permutation::from_images(images)?;
            p = c.compose(&p)?;
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    /// Composition `self ∘ q`: apply `q` first, then `self`.
    pub fn compose(&self, q: &Permutation) -> Result<Self, GroupError> {
        if self.degree() != q.degree() {
            return Err(GroupError::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        let images = (0..q.degree()).map(|i| self.images[q.images[i]]).collect();
        Ok(Permutation { images })
    }

    /// Disjoint cycle notation, e.g. `(0 1)(2 4 3)`; the identity prints as `()`.
    pub fn cycle_string(&self) -> String {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            out.push('(');
            let mut pt = start;
            loop {
                seen[pt] = true;
                if pt != start {
                    out.push(' ');
                }
                out.push_str(&pt.to_string());
                pt = self.images[pt];
                if pt == start {
                    break;
                }
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_composes_trivially() {
        let p = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let e = Permutation::identity(3);
        assert_eq!(e.compose(&p).unwrap(), p);
        assert_eq!(p.compose(&e).unwrap(), p);
    }

    #[test]
    fn involution_squares_to_identity() {
        let p = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert_eq!(p.compose(&p).unwrap(), Permutation::identity(3));
    }

    #[test]
    fn composition_convention_applies_right_factor_first() {
        // (0 1 2) ∘ (0 1): q = (0 1) first, then p = (0 1 2); result(i) = p(q(i)).
        let p = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let q = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let r = p.compose(&q).unwrap();
        assert_eq!(r.images(), &[2, 1, 0]);
        assert_eq!(r.cycle_string(), "(0 2)");
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let p = Permutation::identity(3);
        let q = Permutation::identity(4);
        assert!(p.compose(&q).is_err());
    }

    #[test]
    fn non_bijective_images_rejected() {
        assert!(Permutation::from_images(vec![0, 0, 2]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let p = Permutation::from_images(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(4));
        assert_eq!(p.inverse().compose(&p).unwrap(), Permutation::identity(4));
    }

    #[test]
    fn cycle_string_formats() {
        assert_eq!(Permutation::identity(3).cycle_string(), "()");
        let p = Permutation::from_cycles(5, &[vec![0, 1], vec![2, 4, 3]]).unwrap();
        assert_eq!(p.cycle_string(), "(0 1)(2 4 3)");
    }
}
