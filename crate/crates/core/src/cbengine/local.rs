//! Local shape of a point: what its neighbourhoods look like, enough to read off
//! its rank, its local cardinality and `sup Omega_k`.

use serde::Serialize;

use crate::ordinal::{Cardinal, Ordinal};

/// One side of a point in a linear space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Germ {
    /// Nothing on this side: the point is an end of its part.
    End,
    /// An immediate neighbour.
    Isolated,
    /// Approached like the top of `[0, w^e]`, `e >= 1`.
    Ordinal(Ordinal),
    /// Approached by a punctured ladder whose column limits are missing.
    Ladder,
}

impl Germ {
    pub fn ordinal(e: Ordinal) -> Germ {
        if e.is_zero() {
            Germ::Isolated
        } else {
            Germ::Ordinal(e)
        }
    }

    pub fn rank(&self) -> Ordinal {
        match self {
            Germ::End | Germ::Isolated => Ordinal::zero(),
            Germ::Ordinal(e) => e.clone(),
            Germ::Ladder => Ordinal::one(),
        }
    }

    /// Least size of a one-sided neighbourhood, the point excluded.
    pub fn card(&self) -> Cardinal {
        match self {
            Germ::End | Germ::Isolated => Cardinal::Finite(0),
            Germ::Ordinal(e) => Ordinal::approach_cardinality(e),
            Germ::Ladder => Cardinal::aleph0(),
        }
    }

    /// `sup Omega_k` contributed by this side, for a regular uncountable `k`.
    pub fn omega(&self, kappa: &Cardinal) -> Ordinal {
        match self {
            Germ::End | Germ::Isolated => Ordinal::zero(),
            Germ::Ladder => Ordinal::one(),
            Germ::Ordinal(e) => ordinal_omega(e, kappa),
        }
    }

    pub fn is_end(&self) -> bool {
        matches!(self, Germ::End)
    }
}

/// `sup Omega_k` at the top of `[0, w^e]`: the whole approach is small, or a
/// small cofinal set lets every rank below `o(k)` through, or neither.
pub fn ordinal_omega(e: &Ordinal, kappa: &Cardinal) -> Ordinal {
    if e.is_zero() {
        return Ordinal::zero();
    }
    if Ordinal::approach_cardinality(e) < *kappa {
        e.clone()
    } else if Ordinal::omega_pow(e).cofinality() < *kappa {
        kappa.initial_ordinal()
    } else {
        Ordinal::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Local {
    /// A point of rank `r` looks like the top of `[0, w^r]` on one side and is
    /// isolated on the other. Shared by whole classes of interval points.
    Ordinal,
    Point { left: Germ, right: Germ },
    /// A hedgehog body: its neighbourhoods are unions of basepoint neighbourhoods.
    Body { lc: Cardinal, parts: Vec<(Local, Ordinal)>, tower: Option<Ordinal> },
    /// A point `(z, h)` of `Z x H` with `rank(z) = shift <= 1`.
    Product { shift: u64, z_lc: Cardinal, inner: Box<Local> },
}

impl Local {
    /// Least size of a neighbourhood of a point of this shape and rank.
    pub fn lc(&self, rank: &Ordinal) -> Cardinal {
        let one = Cardinal::Finite(1);
        match self {
            Local::Ordinal => one.max(Ordinal::approach_cardinality(rank)),
            Local::Point { left, right } => one.max(left.card()).max(right.card()),
            Local::Body { lc, .. } => lc.clone(),
            Local::Product { shift, z_lc, inner } => {
                let r = rank.sub_nat(*shift).expect("product rank below its shift");
                z_lc.mul(&inner.lc(&r))
            }
        }
    }

    /// `sup Omega_k` for a regular uncountable `k`.
    pub fn omega(&self, rank: &Ordinal, kappa: &Cardinal) -> Ordinal {
        match self {
            Local::Ordinal => ordinal_omega(rank, kappa),
            Local::Point { left, right } => left.omega(kappa).max(right.omega(kappa)),
            Local::Body { parts, tower, .. } => {
                let mut best = Ordinal::zero();
                for (l, r) in parts {
                    best = best.max(l.omega(r, kappa));
                }
                if let Some(lambda) = tower {
                    best = best.max(if lambda.cardinality() < *kappa {
                        lambda.clone()
                    } else if lambda.cofinality() < *kappa {
                        kappa.initial_ordinal()
                    } else {
                        Ordinal::zero()
                    });
                }
                best
            }
            Local::Product { shift, inner, .. } => {
                let r = rank.sub_nat(*shift).expect("product rank below its shift");
                let w = inner.omega(&r, kappa);
                if w == kappa.initial_ordinal() {
                    w
                } else {
                    w.add(&Ordinal::nat(*shift))
                }
            }
        }
    }

    /// Replace `End` germs by `Isolated`, once a linear space stands on its own.
    pub fn closed_off(self) -> Local {
        match self {
            Local::Point { left, right } => Local::Point { left: close(left), right: close(right) },
            other => other,
        }
    }
}

fn close(g: Germ) -> Germ {
    if g.is_end() {
        Germ::Isolated
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn lemma3_dichotomy_on_germs() {
        let k1 = Cardinal::aleph(1);
        // the top of [0, o(k)] has cofinality k: no small set reaches it
        assert_eq!(ordinal_omega(&o("o(aleph_1)"), &k1), o("0"));
        // o(k)*w has a countable cofinal set
        assert_eq!(ordinal_omega(&o("o(aleph_1)+1"), &k1), o("o(aleph_1)"));
        assert_eq!(ordinal_omega(&o("w+1"), &k1), o("w+1"));
    }

    #[test]
    fn lemma4_point() {
        let k1 = Cardinal::aleph(1);
        let z = Local::Point { left: Germ::ordinal(o("w+1")), right: Germ::ordinal(o("o(aleph_1)")) };
        assert_eq!(z.lc(&o("o(aleph_1)")), k1);
        assert_eq!(z.omega(&o("o(aleph_1)"), &k1), o("w+1"));
    }

    #[test]
    fn product_shift() {
        let k1 = Cardinal::aleph(1);
        let p = Local::Product { shift: 1, z_lc: Cardinal::aleph0(), inner: Box::new(Local::Ordinal) };
        assert_eq!(p.omega(&o("o(aleph_1)+1"), &k1), o("1"));
        assert_eq!(p.lc(&o("3")), Cardinal::aleph0());
    }
}
