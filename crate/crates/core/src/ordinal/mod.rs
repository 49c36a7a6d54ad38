//! Ordinals in Cantor normal form, extended with initial-ordinal atoms `o(aleph_i)`.
//!
//! An [`Ordinal`] is a finite sum `w^e1*c1 + ... + w^ek*ck` with strictly
//! decreasing exponents and positive coefficients. Exponents are themselves
//! ordinals, except that an exponent may be the atom `o(aleph_i)` (for an
//! atom-free index `i >= 1`). Because every uncountable initial ordinal is an
//! epsilon number, `w^o(aleph_i) = o(aleph_i)`, so the atom is stored as the
//! single term whose exponent is the atom itself. Values are bounded below the
//! first epsilon number above the largest atom used; without atoms this is
//! the familiar bound `epsilon_0`.

mod cardinal;
pub(crate) mod text;

pub use cardinal::{Cardinal, CardinalSym, Regularity};
pub use text::ParseOrdinalError;

use std::cmp::Ordering;
use std::fmt;

/// Exponent of a CNF term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Exp {
    Plain(Ordinal),
    /// The initial ordinal `o(aleph_index)`, a fixed point of `e -> w^e`.
    Initial(Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Term {
    exp: Exp,
    coeff: u64,
}

/// An ordinal in (extended) Cantor normal form. Immutable; cheap enough to clone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Exp {
    fn from_ordinal(e: Ordinal) -> Exp {
        if let [Term { exp: Exp::Initial(idx), coeff: 1 }] = e.terms.as_slice() {
            return Exp::Initial(idx.clone());
        }
        Exp::Plain(e)
    }

    fn to_ordinal(&self) -> Ordinal {
        match self {
            Exp::Plain(e) => e.clone(),
            Exp::Initial(idx) => Ordinal::initial_atom(idx.clone()),
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Exp::Plain(e) if e.is_zero())
    }
}

fn checked(v: Option<u64>) -> u64 {
    v.expect("ordinal coefficient overflow")
}

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Ordinal {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            return Ordinal::zero();
        }
        Ordinal { terms: vec![Term { exp: Exp::Plain(Ordinal::zero()), coeff: n }] }
    }

    /// The first infinite ordinal.
    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(&Ordinal::one())
    }

    /// `w^e * c`; `c = 0` gives zero.
    pub fn monomial(e: &Ordinal, c: u64) -> Ordinal {
        if c == 0 {
            return Ordinal::zero();
        }
        Ordinal { terms: vec![Term { exp: Exp::from_ordinal(e.clone()), coeff: c }] }
    }

    /// `w^e`. Normalizes `w^o(k)` to `o(k)`.
    pub fn omega_pow(e: &Ordinal) -> Ordinal {
        Ordinal::monomial(e, 1)
    }

    fn initial_atom(index: Ordinal) -> Ordinal {
        Ordinal { terms: vec![Term { exp: Exp::Initial(index), coeff: 1 }] }
    }

    /// The initial ordinal `o(aleph_index)`: `w` for index 0, an atom otherwise.
    ///
    /// Panics if `index` itself contains atoms (indices are kept countable).
    pub fn initial(index: &Ordinal) -> Ordinal {
        assert!(index.is_plain(), "aleph index must be free of initial-ordinal atoms");
        if index.is_zero() {
            Ordinal::omega()
        } else {
            Ordinal::initial_atom(index.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no `o(aleph_i)` atom occurs anywhere in the value.
    pub fn is_plain(&self) -> bool {
        self.terms.iter().all(|t| match &t.exp {
            Exp::Plain(e) => e.is_plain(),
            Exp::Initial(_) => false,
        })
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term { exp, coeff }] if exp.is_zero() => Some(*coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exp.is_zero())
    }

    /// Nonzero and not a successor.
    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// The leading exponent (`0` for zero and for finite ordinals).
    pub fn degree(&self) -> Ordinal {
        self.terms.first().map_or_else(Ordinal::zero, |t| t.exp.to_ordinal())
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.coeff)
    }

    /// Exponent of the last CNF term: the Cantor-Bendixson rank of this point
    /// inside any ordinal interval `[0, theta]` with `theta >= self`.
    pub fn point_rank(&self) -> Ordinal {
        self.terms.last().map_or_else(Ordinal::zero, |t| t.exp.to_ordinal())
    }

    /// CNF terms as `(exponent, coefficient)` pairs, leading term first.
    pub fn cnf(&self) -> Vec<(Ordinal, u64)> {
        self.terms.iter().map(|t| (t.exp.to_ordinal(), t.coeff)).collect()
    }

    /// Index `i` when `self` is exactly the atom `o(aleph_i)`.
    pub fn as_initial_index(&self) -> Option<&Ordinal> {
        match self.terms.as_slice() {
            [Term { exp: Exp::Initial(idx), coeff: 1 }] => Some(idx),
            _ => None,
        }
    }

    /// Indices of every atom occurring anywhere in the value.
    pub fn atom_indices(&self) -> Vec<Ordinal> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Ordinal>) {
        for t in &self.terms {
            match &t.exp {
                Exp::Plain(e) => e.collect_atoms(out),
                Exp::Initial(idx) => out.push(idx.clone()),
            }
        }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// Immediate predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().unwrap();
        if last.coeff == 1 {
            terms.pop();
        } else {
            last.coeff -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        for t in &self.terms {
            match cmp_exp(&t.exp, &lead.exp) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term { exp: t.exp.clone(), coeff: checked(t.coeff.checked_add(lead.coeff)) });
                    terms.extend(rhs.terms[1..].iter().cloned());
                    return Ordinal { terms };
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rhs.terms.iter().cloned());
        Ordinal { terms }
    }

    /// Ordinal product `self * rhs`, distributing over the terms of `rhs`.
    pub fn mul(&self, rhs: &Ordinal) -> Ordinal {
        if self.is_zero() || rhs.is_zero() {
            return Ordinal::zero();
        }
        let deg = self.degree();
        let mut acc = Ordinal::zero();
        for t in &rhs.terms {
            let piece = if t.exp.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coeff = checked(terms[0].coeff.checked_mul(t.coeff));
                Ordinal { terms }
            } else {
                Ordinal::monomial(&deg.add(&t.exp.to_ordinal()), t.coeff)
            };
            acc = acc.add(&piece);
        }
        acc
    }

    /// The unique `d` with `self + d = rhs`, defined when `self <= rhs`.
    pub fn sub_left(&self, rhs: &Ordinal) -> Option<Ordinal> {
        if *self > *rhs {
            return None;
        }
        for (i, rt) in rhs.terms.iter().enumerate() {
            match self.terms.get(i) {
                Some(lt) if lt == rt => continue,
                Some(lt) if lt.exp == rt.exp => {
                    // lt.coeff < rt.coeff because self <= rhs
                    let mut terms = vec![Term { exp: rt.exp.clone(), coeff: rt.coeff - lt.coeff }];
                    terms.extend(rhs.terms[i + 1..].iter().cloned());
                    return Some(Ordinal { terms });
                }
                _ => return Some(Ordinal { terms: rhs.terms[i..].to_vec() }),
            }
        }
        Some(Ordinal::zero())
    }

    /// Split `self` as `y + n` with `y` zero or a limit and `n` finite.
    pub fn split_finite(&self) -> (Ordinal, u64) {
        match self.terms.last() {
            Some(t) if t.exp.is_zero() => {
                let mut terms = self.terms.clone();
                let n = terms.pop().unwrap().coeff;
                (Ordinal { terms }, n)
            }
            _ => (self.clone(), 0),
        }
    }

    /// The `r` with `r + n = self`, if any.
    pub fn sub_nat(&self, n: u64) -> Option<Ordinal> {
        let (y, m) = self.split_finite();
        (m >= n).then(|| y.add(&Ordinal::nat(m - n)))
    }

    /// Least `r` with `r + n >= self`.
    pub fn unshift(&self, n: u64) -> Ordinal {
        let (y, m) = self.split_finite();
        if m >= n {
            y.add(&Ordinal::nat(m - n))
        } else {
            y
        }
    }

    /// Largest multiple of `w^e` that is `<= self`.
    pub fn floor_multiple(&self, e: &Ordinal) -> Ordinal {
        let e = Exp::from_ordinal(e.clone());
        Ordinal {
            terms: self.terms.iter().take_while(|t| cmp_exp(&t.exp, &e) != Ordering::Less).cloned().collect(),
        }
    }

    /// True when `w^e` divides `self` on the left, i.e. `self = w^e * d`.
    /// Zero is divisible by everything.
    pub fn divisible_by_omega_pow(&self, e: &Ordinal) -> bool {
        match self.terms.last() {
            None => true,
            Some(t) => cmp_exp(&t.exp, &Exp::from_ordinal(e.clone())) != Ordering::Less,
        }
    }

    /// `|self|` as a cardinal.
    pub fn cardinality(&self) -> Cardinal {
        if let Some(n) = self.as_nat() {
            return Cardinal::Finite(n);
        }
        match self.atom_indices().pop() {
            Some(idx) => Cardinal::Aleph(idx),
            None => Cardinal::aleph0(),
        }
    }

    /// Cofinality of the ordinal: `0`, `1` for successors, otherwise an infinite regular cardinal.
    pub fn cofinality(&self) -> Cardinal {
        match self.terms.last() {
            None => Cardinal::Finite(0),
            Some(t) => match &t.exp {
                Exp::Plain(e) if e.is_zero() => Cardinal::Finite(1),
                Exp::Plain(e) if e.is_successor() => Cardinal::aleph0(),
                Exp::Plain(e) => e.cofinality(),
                Exp::Initial(idx) => {
                    if idx.is_successor() {
                        Cardinal::Aleph(idx.clone())
                    } else {
                        // limit index: cf(aleph_lambda) = cf(lambda), and indices are countable
                        idx.cofinality()
                    }
                }
            },
        }
    }

    /// Cardinality of the one-sided approach `[0, w^e[` to a point of rank `e`.
    pub fn approach_cardinality(rank: &Ordinal) -> Cardinal {
        if rank.is_zero() {
            Cardinal::Finite(0)
        } else {
            Cardinal::aleph0().max(rank.cardinality())
        }
    }
}

fn cmp_exp(a: &Exp, b: &Exp) -> Ordering {
    match (a, b) {
        (Exp::Plain(x), Exp::Plain(y)) => x.cmp(y),
        (Exp::Initial(i), Exp::Initial(j)) => i.cmp(j),
        (Exp::Plain(x), Exp::Initial(j)) => cmp_with_initial(x, j),
        (Exp::Initial(i), Exp::Plain(y)) => cmp_with_initial(y, i).reverse(),
    }
}

/// Compare `x` with `o(aleph_j)`. `x` is never itself that atom in normal form.
fn cmp_with_initial(x: &Ordinal, j: &Ordinal) -> Ordering {
    let Some(lead) = x.terms.first() else {
        return Ordering::Less;
    };
    match &lead.exp {
        Exp::Initial(i) => match i.cmp(j) {
            Ordering::Equal if lead.coeff == 1 && x.terms.len() == 1 => Ordering::Equal,
            Ordering::Equal => Ordering::Greater,
            other => other,
        },
        // o(aleph_j) is additively indecomposable, so only the leading power matters
        Exp::Plain(f) => cmp_with_initial(f, j),
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let c = cmp_exp(&a.exp, &b.exp).then(a.coeff.cmp(&b.coeff));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_ordinal(self, f)
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseOrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_ordinal(s)
    }
}

impl serde::Serialize for Ordinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Ordinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Three-way comparison, exposed for callers that want the result as a value.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}
