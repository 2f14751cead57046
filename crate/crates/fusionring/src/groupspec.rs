//! Parser for textual group specs.
//!
//! Grammar:
//! ```text
//! spec   := atom ("x" atom)*
//! atom   := "C"int | "D"int | "S"int | "A"int | "Q8" | "perm:"int":"cycles
//! cycles := cycle (";" cycle)*
//! cycle  := "(" int ("," int)+ ")"
//! ```
//! `D<n>` is the dihedral group of order `2n`; `perm` points are 0-based.

use crate::group::GroupError;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    Perm { degree: usize, cycles: Vec<Vec<usize>> },
}

/// A parsed construction plan: the direct product of its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPlan {
    pub atoms: Vec<Atom>,
}

const MAX_PARAM: usize = 1_000_000;

impl Atom {
    fn degree(&self) -> usize {
        match *self {
            Atom::Cyclic(n) => n.max(1),
            Atom::Dihedral(1) => 2,
            Atom::Dihedral(2) => 4,
            Atom::Dihedral(n) => n,
            Atom::Symmetric(n) | Atom::Alternating(n) => n.max(1),
            Atom::Quaternion8 => 8,
            Atom::Perm { degree, .. } => degree,
        }
    }

    /// Group order when cheap to predict; `None` for explicit generators.
    fn order_estimate(&self) -> Option<usize> {
        match *self {
            Atom::Cyclic(n) => Some(n),
            Atom::Dihedral(n) => Some(2 * n),
            Atom::Symmetric(n) => Some(factorial_saturating(n)),
            Atom::Alternating(n) => Some(if n < 3 { 1 } else { factorial_saturating(n) / 2 }),
            Atom::Quaternion8 => Some(8),
            Atom::Perm { .. } => None,
        }
    }

    fn generators(&self) -> Result<Vec<Permutation>, GroupError> {
        let d = self.degree();
        let mut gens = Vec::new();
        match self {
            Atom::Cyclic(n) => {
                if *n >= 2 {
                    gens.push(Permutation::from_cycles(d, &[(0..*n).collect()])?);
                }
            }
            Atom::Dihedral(n) => match *n {
                1 => gens.push(Permutation::from_cycles(d, &[vec![0, 1]])?),
                2 => {
                    gens.push(Permutation::from_cycles(d, &[vec![0, 1]])?);
                    gens.push(Permutation::from_cycles(d, &[vec![2, 3]])?);
                }
                n => {
                    gens.push(Permutation::from_cycles(d, &[(0..n).collect()])?);
                    gens.push(Permutation::from_images((0..n).rev().collect())?);
                }
            },
            Atom::Symmetric(n) => {
                if *n >= 2 {
                    gens.push(Permutation::from_cycles(d, &[vec![0, 1]])?);
                }
                if *n >= 3 {
                    gens.push(Permutation::from_cycles(d, &[(0..*n).collect()])?);
                }
            }
            Atom::Alternating(n) => {
                // Consecutive 3-cycles generate A_n.
                for i in 0..n.saturating_sub(2) {
                    gens.push(Permutation::from_cycles(d, &[vec![i, i + 1, i + 2]])?);
                }
            }
            Atom::Quaternion8 => {
                // Left regular representation on {1, i, j, k, -1, -i, -j, -k}.
                gens.push(Permutation::from_images(vec![1, 4, 3, 6, 5, 0, 7, 2])?);
                gens.push(Permutation::from_images(vec![2, 7, 4, 1, 6, 3, 0, 5])?);
            }
            Atom::Perm { degree, cycles } => {
                for cycle in cycles {
                    gens.push(Permutation::from_cycles(*degree, std::slice::from_ref(cycle))?);
                }
            }
        }
        Ok(gens)
    }
}

impl GroupPlan {
    pub fn degree(&self) -> usize {
        self.atoms.iter().map(Atom::degree).sum()
    }

    pub fn order_estimate(&self) -> Option<usize> {
        self.atoms
            .iter()
            .map(Atom::order_estimate)
            .try_fold(1usize, |acc, est| est.map(|e| acc.saturating_mul(e)))
    }

    /// Total degree plus generators of the direct product, each atom acting
    /// on its own block of points.
    pub fn generators(&self) -> Result<(usize, Vec<Permutation>), GroupError> {
        let total = self.degree();
        let mut gens = Vec::new();
        let mut offset = 0;
        for atom in &self.atoms {
            let d = atom.degree();
            for g in atom.generators()? {
                let mut images: Vec<usize> = (0..total).collect();
                for (pt, &img) in g.images().iter().enumerate() {
                    images[offset + pt] = offset + img;
                }
                gens.push(Permutation::from_images(images)?);
            }
            offset += d;
        }
        Ok((total, gens))
    }
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == b => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!(
                "expected '{}', found '{}'",
                b as char, c as char
            ))),
            None => Err(self.error(format!("expected '{}', found end of input", b as char))),
        }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn integer(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are ascii");
        match text.parse::<usize>() {
            Ok(v) if v <= MAX_PARAM => Ok(v),
            _ => Err(ParseError {
                pos: start,
                msg: format!("integer out of range (max {MAX_PARAM})"),
            }),
        }
    }

    fn family_param(&mut self, family: char, min: usize) -> Result<usize, ParseError> {
        let start = self.pos;
        let n = self.integer()?;
        if n < min {
            return Err(ParseError {
                pos: start,
                msg: format!("{family}{n} is out of range (need {family}<n> with n >= {min})"),
            });
        }
        Ok(n)
    }

    fn cycle(&mut self) -> Result<Vec<usize>, ParseError> {
        self.expect(b'(')?;
        let mut pts = vec![self.integer()?];
        self.expect(b',')?;
        pts.push(self.integer()?);
        while self.peek() == Some(b',') {
            self.pos += 1;
            pts.push(self.integer()?);
        }
        self.expect(b')')?;
        Ok(pts)
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let start = self.pos;
        match self.bump() {
            Some(b'C') => Ok(Atom::Cyclic(self.family_param('C', 1)?)),
            Some(b'D') => Ok(Atom::Dihedral(self.family_param('D', 1)?)),
            Some(b'S') => Ok(Atom::Symmetric(self.family_param('S', 1)?)),
            Some(b'A') => Ok(Atom::Alternating(self.family_param('A', 1)?)),
            Some(b'Q') => {
                if self.peek() == Some(b'8') {
                    self.pos += 1;
                    Ok(Atom::Quaternion8)
                } else {
                    Err(self.error("unknown family (only Q8 is supported)"))
                }
            }
            Some(b'p') => {
                let rest = &self.bytes[start..];
                if rest.starts_with(b"perm:") {
                    self.pos = start + 5;
                    let degree = self.integer()?;
                    if degree == 0 {
                        return Err(ParseError {
                            pos: start + 5,
                            msg: "perm degree must be positive".into(),
                        });
                    }
                    self.expect(b':')?;
                    let mut cycles = vec![self.cycle()?];
                    while self.peek() == Some(b';') {
                        self.pos += 1;
                        cycles.push(self.cycle()?);
                    }
                    for cycle in &cycles {
                        for &pt in cycle {
                            if pt >= degree {
                                return Err(ParseError {
                                    pos: start,
                                    msg: format!("point {pt} out of range for degree {degree}"),
                                });
                            }
                        }
                    }
                    Ok(Atom::Perm { degree, cycles })
                } else {
                    Err(ParseError {
                        pos: start,
                        msg: "unknown family (expected C<n>, D<n>, S<n>, A<n>, Q8 or perm:...)"
                            .into(),
                    })
                }
            }
            Some(c) => Err(ParseError {
                pos: start,
                msg: format!(
                    "unknown family '{}' (expected C<n>, D<n>, S<n>, A<n>, Q8 or perm:...)",
                    c as char
                ),
            }),
            None => Err(ParseError {
                pos: start,
                msg: "empty group spec".into(),
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<GroupPlan, ParseError> {
    let mut sc = Scanner {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut atoms = vec![sc.atom()?];
    while sc.peek() == Some(b'x') {
        sc.pos += 1;
        atoms.push(sc.atom()?);
    }
    if sc.pos != sc.bytes.len() {
        return Err(sc.error("unexpected trailing input"));
    }
    Ok(GroupPlan { atoms })
}

fn factorial_saturating(n: usize) -> usize {
    (2..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}
