//! Temperley-Lieb diagrams and the algebra they span.
//!
//! An n-diagram has `n` bottom nodes (labels `0..n`, left to right) and `n`
//! top nodes (labels `n..2n`, left to right). `partner[x]` is the node that
//! `x` is joined to. Displayed labels are 1-based.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::scalar::ScalarPoly;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    n: usize,
    partner: Vec<u8>,
}

impl Diagram {
    pub fn identity(n: usize) -> Self {
        let mut partner = vec![0u8; 2 * n];
        for i in 0..n {
            partner[i] = (i + n) as u8;
            partner[i + n] = i as u8;
        }
        Diagram { n, partner }
    }

    /// The generator `e_i`, `1 <= i < n`.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return invalid(format!("generator e_{i} does not exist for n = {n}"));
        }
        let mut d = Self::identity(n);
        let (a, b) = (i - 1, i);
        d.partner[a] = b as u8;
        d.partner[b] = a as u8;
        d.partner[a + n] = (b + n) as u8;
        d.partner[b + n] = (a + n) as u8;
        Ok(d)
    }

    /// Builds a diagram from 1-based node pairs; rejects crossings.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![u8::MAX; 2 * n];
        if pairs.len() != n {
            return invalid("a diagram on n nodes per side needs exactly n pairs");
        }
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > 2 * n || b > 2 * n || a == b {
                return invalid(format!("bad pair ({a},{b})"));
            }
            let (a, b) = (a - 1, b - 1);
            if partner[a] != u8::MAX || partner[b] != u8::MAX {
                return invalid("node used twice");
            }
            partner[a] = b as u8;
            partner[b] = a as u8;
        }
        let d = Diagram { n, partner };
        if !d.is_planar() {
            return invalid("pairs cross");
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, node: usize) -> usize {
        self.partner[node] as usize
    }

    /// Position of a node when walking the boundary: bottom left to
    /// right, then top right to left.
    fn circle_pos(&self, node: usize) -> usize {
        if node < self.n {
            node
        } else {
            3 * self.n - 1 - node
        }
    }

    fn is_planar(&self) -> bool {
        let chords: Vec<(usize, usize)> = (0..2 * self.n)
            .filter(|&x| x < self.partner(x))
            .map(|x| {
                let (a, b) = (self.circle_pos(x), self.circle_pos(self.partner(x)));
                (a.min(b), a.max(b))
            })
            .collect();
        chords.iter().all(|&(a, b)| chords.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    }

    /// Sorted 1-based pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n).filter(|&x| x < self.partner(x)).map(|x| (x + 1, self.partner(x) + 1)).collect()
    }

    /// Number of through lines joining a bottom node to a top node.
    pub fn through_lines(&self) -> usize {
        (0..self.n).filter(|&x| self.partner(x) >= self.n).count()
    }

    /// `self · other`: `other` drawn on top of `self`. Returns the resulting
    /// diagram and the number of closed loops removed.
    pub fn concat(&self, other: &Diagram) -> (Diagram, u32) {
        assert_eq!(self.n, other.n, "diagrams of different sizes");
        let n = self.n;
        let mut seen = vec![false; n];
        let mut partner = vec![0u8; 2 * n];
        // Walk from an outer node until another outer node is reached.
        // `lower` tells which diagram we are currently in.
        let walk = |mut lower: bool, mut node: usize, seen: &mut Vec<bool>| -> usize {
            loop {
                let d = if lower { self } else { other };
                let p = d.partner(node);
                if lower {
                    if p < n {
                        return p;
                    }
                    seen[p - n] = true;
                    lower = false;
                    node = p - n;
                } else {
                    if p >= n {
                        return p;
                    }
                    seen[p] = true;
                    lower = true;
                    node = p + n;
                }
            }
        };
        for b in 0..n {
            let end = walk(true, b, &mut seen);
            partner[b] = end as u8;
        }
        for t in n..2 * n {
            let end = walk(false, t, &mut seen);
            partner[t] = end as u8;
        }
        let mut loops = 0;
        for m in 0..n {
            if seen[m] {
                continue;
            }
            loops += 1;
            let mut cur = m;
            loop {
                seen[cur] = true;
                let up = other.partner(cur);
                seen[up] = true;
                let down = self.partner(up + n) - n;
                if down == m {
                    break;
                }
                cur = down;
            }
        }
        (Diagram { n, partner }, loops)
    }

    /// All `Catalan(n)` diagrams, sorted.
    pub fn enumerate(n: usize) -> Vec<Diagram> {
        let mut out = Vec::new();
        let mut circle = vec![usize::MAX; 2 * n];
        fill_matchings(&mut circle, 0, &mut |m| {
            let label = |c: usize| if c < n { c } else { 3 * n - 1 - c };
            let mut partner = vec![0u8; 2 * n];
            for (c, &d) in m.iter().enumerate() {
                partner[label(c)] = label(d) as u8;
            }
            out.push(Diagram { n, partner });
        });
        out.sort();
        out
    }
}

/// Enumerates noncrossing perfect matchings of the points `start..` in
/// `m`, calling `f` on each complete matching.
fn fill_matchings(m: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(m: &mut Vec<usize>, lo: usize, hi: usize, rest: &mut Vec<(usize, usize)>, f: &mut dyn FnMut(&[usize])) {
        if lo >= hi {
            match rest.pop() {
                None => f(m),
                Some((a, b)) => {
                    rec(m, a, b, rest, f);
                    rest.push((a, b));
                }
            }
            return;
        }
        let mut k = lo + 1;
        while k < hi {
            m[lo] = k;
            m[k] = lo;
            rest.push((k + 1, hi));
            rec(m, lo + 1, k, rest, f);
            rest.pop();
            k += 2;
        }
    }
    let hi = m.len();
    rec(m, start, hi, &mut Vec::new(), f);
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An element of `TL_n(β)`: a sparse combination of diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLElement {
    n: usize,
    terms: BTreeMap<Diagram, ScalarPoly>,
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        TLElement { n, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: Diagram) -> Self {
        Self::from_term(d, ScalarPoly::one())
    }

    pub fn from_term(d: Diagram, c: ScalarPoly) -> Self {
        let mut e = Self::zero(d.n());
        e.add_term(d, &c);
        e
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagram(Diagram::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &ScalarPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &Diagram) -> ScalarPoly {
        self.terms.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: Diagram, c: &ScalarPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &TLElement) -> TLElement {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &ScalarPoly) -> TLElement {
        let mut out = TLElement::zero(self.n);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), &(c * s));
        }
        out
    }

    pub fn mul(&self, other: &TLElement) -> TLElement {
        let mut out = TLElement::zero(self.n);
        let beta = ScalarPoly::beta();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (d, loops) = a.concat(b);
                out.add_term(d, &(&(ca * cb) * &beta.pow(loops)));
            }
        }
        out
    }

    /// The product `e_{w_1} e_{w_2} ...`; the empty word is the identity.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let mut acc = Self::identity(n);
        for &i in word {
            acc = acc.mul(&Self::from_diagram(Diagram::generator(n, i)?));
        }
        Ok(acc)
    }

    /// `-(e_1 + ... + e_{n-1})`.
    pub fn hamiltonian(n: usize) -> Self {
        let mut h = Self::zero(n);
        for i in 1..n {
            h.add_term(Diagram::generator(n, i).expect("in range"), &ScalarPoly::constant(-1));
        }
        h
    }
}
