//! Links and the standard modules `V_{n,d}`.
//!
//! A link on `n` nodes pairs `(n-d)/2` couples of nodes with non-crossing
//! arcs and leaves `d` defects, none of which sits under an arc. Bases are
//! ordered by the dyadic number `Σ 2^{-i}` over the left ends `i` of arcs.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::diagram::{Diagram, TLElement};
use crate::error::{invalid, Result};
use crate::poly_matrix::PolyMatrix;
use crate::report::VerificationReport;
use crate::scalar::ScalarPoly;

pub(crate) fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `dim V_{n,d}`; zero when `d` and `n` have different parity or `d > n`.
pub fn module_dim(n: usize, d: usize) -> usize {
    if d > n || !(n - d).is_multiple_of(2) {
        return 0;
    }
    let k = ((n - d) / 2) as i64;
    (binomial(n as i64, k) - binomial(n as i64, k - 1)) as usize
}

pub(crate) fn check_nd(n: usize, d: usize) -> Result<()> {
    if d > n || !(n - d).is_multiple_of(2) {
        return invalid(format!("no standard module with n = {n}, d = {d}"));
    }
    if n > 60 {
        return invalid("n is too large for the dyadic ordering");
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Link {
    n: usize,
    /// Partner of each node, `-1` for a defect.
    partner: Vec<i8>,
    /// `Σ 2^{n-i}` over 1-based left ends `i`.
    key: u64,
}

impl Link {
    fn from_partner(partner: Vec<i8>) -> Self {
        let n = partner.len();
        let key = partner.iter().enumerate().filter(|&(i, &p)| p > i as i8).map(|(i, _)| 1u64 << (n - 1 - i)).sum();
        Link { n, partner, key }
    }

    /// Builds a link from 1-based arcs; every other node is a defect.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![-1i8; n];
        for &(a, b) in arcs {
            let (a, b) = (a.min(b), a.max(b));
            if a == 0 || b > n || a == b {
                return invalid(format!("bad arc ({a},{b})"));
            }
            if partner[a - 1] != -1 || partner[b - 1] != -1 {
                return invalid("node used twice");
            }
            partner[a - 1] = (b - 1) as i8;
            partner[b - 1] = (a - 1) as i8;
        }
        // Scan with a stack: arcs must nest and no defect may be covered.
        let mut stack = Vec::new();
        for (i, &p) in partner.iter().enumerate() {
            if p < 0 {
                if !stack.is_empty() {
                    return invalid(format!("defect {} lies under an arc", i + 1));
                }
            } else if p as usize > i {
                stack.push(i);
            } else if stack.pop() != Some(p as usize) {
                return invalid("arcs cross");
            }
        }
        Ok(Self::from_partner(partner))
    }

    /// Reconstructs the unique link on `n` nodes with `d` defects whose arcs
    /// start at the given 0-based nodes, if such a link exists.
    pub fn from_left_ends(n: usize, starts: &[usize]) -> Option<Self> {
        let mut is_start = vec![false; n];
        for &s in starts {
            *is_start.get_mut(s)? = true;
        }
        let mut partner = vec![-1i8; n];
        let mut stack = Vec::new();
        for i in 0..n {
            if is_start[i] {
                stack.push(i);
            } else if let Some(o) = stack.pop() {
                partner[o] = i as i8;
                partner[i] = o as i8;
            }
        }
        stack.is_empty().then(|| Self::from_partner(partner))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn defect_count(&self) -> usize {
        self.partner.iter().filter(|&&p| p < 0).count()
    }

    /// 0-based partner of a 0-based node, `None` for defects.
    pub fn partner(&self, i: usize) -> Option<usize> {
        let p = self.partner[i];
        (p >= 0).then_some(p as usize)
    }

    /// 1-based arcs ordered by left end.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n).filter_map(|i| self.partner(i).filter(|&p| p > i).map(|p| (i + 1, p + 1))).collect()
    }

    /// 1-based defect positions.
    pub fn defects(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.partner[i] < 0).map(|i| i + 1).collect()
    }

    /// 0-based left ends of arcs.
    pub fn left_ends(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.partner(i).is_some_and(|p| p > i)).collect()
    }

    /// The link `|self, other⟩` on `n + m` nodes.
    pub fn concat(&self, other: &Link) -> Link {
        let off = self.n as i8;
        let mut partner = self.partner.clone();
        partner.extend(other.partner.iter().map(|&p| if p < 0 { p } else { p + off }));
        Link::from_partner(partner)
    }

    /// An arc over the whole link. Requires no defects.
    pub fn nest(&self) -> Result<Link> {
        if self.defect_count() > 0 {
            return invalid("cannot put an arc over a defect");
        }
        let n = self.n;
        let mut partner = Vec::with_capacity(n + 2);
        partner.push((n + 1) as i8);
        partner.extend(self.partner.iter().map(|&p| p + 1));
        partner.push(0);
        Ok(Link::from_partner(partner))
    }

    /// A single arc on two nodes.
    pub fn cup() -> Link {
        Link::from_partner(vec![1, 0])
    }

    /// The nodes `start..end` (0-based) as a link in their own right, if no
    /// arc leaves that range.
    pub fn sublink(&self, start: usize, end: usize) -> Option<Link> {
        let mut partner = Vec::with_capacity(end - start);
        for i in start..end {
            match self.partner(i) {
                None => partner.push(-1),
                Some(p) if (start..end).contains(&p) => partner.push((p - start) as i8),
                Some(_) => return None,
            }
        }
        Some(Link::from_partner(partner))
    }

    /// Numerator of the dyadic order key over the denominator `2^n`.
    pub fn dyadic_key(&self) -> u64 {
        self.key
    }

    /// The order key as a reduced fraction `(numerator, denominator)`.
    pub fn dyadic(&self) -> (u64, u64) {
        reduce_dyadic(self.key, self.n)
    }

    /// All `(n,d)`-links in increasing dyadic order.
    pub fn enumerate(n: usize, d: usize) -> Result<Vec<Link>> {
        check_nd(n, d)?;
        let arcs = (n - d) / 2;
        let mut out = Vec::with_capacity(module_dim(n, d));
        let mut partner = vec![-1i8; n];
        let mut stack = Vec::new();
        enum_links(0, arcs, d, &mut partner, &mut stack, &mut out);
        out.sort_by_key(|l| l.key);
        Ok(out)
    }

    /// The action of a diagram: the link is drawn on top of `a`. Returns the
    /// new link and the number of loops closed, or `None` when two defects
    /// get joined.
    pub fn act(a: &Diagram, w: &Link) -> Option<(Link, u32)> {
        let n = w.n;
        assert_eq!(a.n(), n, "diagram and link sizes differ");
        let mut seen = vec![false; n];
        let mut partner = vec![-1i8; n];
        let mut defects = 0;
        for b in 0..n {
            if partner[b] >= 0 {
                continue;
            }
            let mut node = b;
            loop {
                let p = a.partner(node);
                if p < n {
                    partner[b] = p as i8;
                    partner[p] = b as i8;
                    break;
                }
                let t = p - n;
                seen[t] = true;
                match w.partner(t) {
                    None => {
                        defects += 1;
                        break;
                    }
                    Some(u) => {
                        seen[u] = true;
                        node = u + n;
                    }
                }
            }
        }
        if defects < w.defect_count() {
            return None;
        }
        let mut loops = 0;
        for t in 0..n {
            if seen[t] {
                continue;
            }
            loops += 1;
            let mut cur = t;
            loop {
                seen[cur] = true;
                let u = w.partner(cur).expect("unvisited nodes carry arcs");
                seen[u] = true;
                let next = a.partner(u + n) - n;
                if next == t {
                    break;
                }
                cur = next;
            }
        }
        Some((Link::from_partner(partner), loops))
    }

    /// The bilinear form: `v` reflected and glued onto `w`. Zero unless
    /// every defect of `v` runs into a defect of `w`; otherwise `β^loops`.
    pub fn gram_form(v: &Link, w: &Link) -> ScalarPoly {
        match Self::gram_loops(v, w) {
            Some(k) => ScalarPoly::beta().pow(k),
            None => ScalarPoly::zero(),
        }
    }

    pub(crate) fn gram_loops(v: &Link, w: &Link) -> Option<u32> {
        let n = v.n;
        assert_eq!(w.n, n, "links of different sizes");
        if v.defect_count() != w.defect_count() {
            return None;
        }
        let mut seen = vec![false; n];
        for start in 0..n {
            if v.partner[start] >= 0 {
                continue;
            }
            // Alternate w-arc, v-arc starting from a defect of v.
            let mut i = start;
            loop {
                seen[i] = true;
                let Some(j) = w.partner(i) else { break };
                seen[j] = true;
                i = v.partner(j)?;
            }
        }
        let mut loops = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            loops += 1;
            let mut i = start;
            loop {
                seen[i] = true;
                let j = v.partner(i)?;
                seen[j] = true;
                i = w.partner(j)?;
                if i == start {
                    break;
                }
            }
        }
        Some(loops)
    }
}

pub(crate) fn reduce_dyadic(mut num: u64, bits: usize) -> (u64, u64) {
    let mut den = 1u64 << bits;
    while num != 0 && num.is_multiple_of(2) && den > 1 {
        num /= 2;
        den /= 2;
    }
    if num == 0 {
        den = 1;
    }
    (num, den)
}

fn enum_links(
    i: usize,
    arcs_left: usize,
    defects_left: usize,
    partner: &mut Vec<i8>,
    stack: &mut Vec<usize>,
    out: &mut Vec<Link>,
) {
    let n = partner.len();
    if i == n {
        if stack.is_empty() && arcs_left == 0 && defects_left == 0 {
            out.push(Link::from_partner(partner.clone()));
        }
        return;
    }
    let remaining = n - i;
    if stack.len() + 2 * arcs_left + defects_left != remaining {
        return;
    }
    if stack.is_empty() && defects_left > 0 {
        partner[i] = -1;
        enum_links(i + 1, arcs_left, defects_left - 1, partner, stack, out);
    }
    if arcs_left > 0 {
        stack.push(i);
        enum_links(i + 1, arcs_left - 1, defects_left, partner, stack, out);
        stack.pop();
    }
    if let Some(o) = stack.pop() {
        partner[o] = i as i8;
        partner[i] = o as i8;
        enum_links(i + 1, arcs_left, defects_left, partner, stack, out);
        partner[o] = -1;
        partner[i] = -1;
        stack.push(o);
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.arcs().iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "{{{}}}", parts.join(","))?;
        let d = self.defects();
        if !d.is_empty() {
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            write!(f, " | {}", ds.join(","))?;
        }
        Ok(())
    }
}

/// The basis `B_{n,d}` with a reverse index.
#[derive(Clone, Debug)]
pub struct StandardModule {
    n: usize,
    d: usize,
    basis: Vec<Link>,
    index: HashMap<Link, usize>,
}

impl StandardModule {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        let basis = Link::enumerate(n, d)?;
        let index = basis.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Ok(StandardModule { n, d, basis, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Link] {
        &self.basis
    }

    pub fn index_of(&self, l: &Link) -> Option<usize> {
        self.index.get(l).copied()
    }

    /// Matrix of a TL element acting on this module; column `j` is the
    /// expansion of `x · basis[j]`.
    pub fn representation_matrix(&self, x: &TLElement) -> Result<PolyMatrix> {
        if x.n() != self.n {
            return invalid("element and module sizes differ");
        }
        let mut m = PolyMatrix::zeros(self.dim(), self.dim());
        let beta = ScalarPoly::beta();
        for (j, w) in self.basis.iter().enumerate() {
            for (a, c) in x.terms() {
                if let Some((v, loops)) = Link::act(a, w) {
                    let i = self.index[&v];
                    m.add_to(i, j, &(c * &beta.pow(loops)));
                }
            }
        }
        Ok(m)
    }

    /// `H_{n,d}`, the matrix of `-(e_1 + ... + e_{n-1})`.
    pub fn hamiltonian(&self) -> PolyMatrix {
        self.representation_matrix(&TLElement::hamiltonian(self.n)).expect("sizes agree")
    }

    /// Gram matrix of the bilinear form.
    pub fn gram(&self) -> PolyMatrix {
        let dim = self.dim();
        let mut g = PolyMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = Link::gram_form(&self.basis[i], &self.basis[j]);
                if !v.is_zero() {
                    g.set(j, i, v.clone());
                    g.set(i, j, v);
                }
            }
        }
        g
    }
}

pub fn hamiltonian_matrix(n: usize, d: usize) -> Result<PolyMatrix> {
    Ok(StandardModule::new(n, d)?.hamiltonian())
}

pub fn gram_matrix(n: usize, d: usize) -> Result<PolyMatrix> {
    Ok(StandardModule::new(n, d)?.gram())
}

pub fn representation_matrix(x: &TLElement, n: usize, d: usize) -> Result<PolyMatrix> {
    StandardModule::new(n, d)?.representation_matrix(x)
}

/// `G ρ(e_j) = ρ(e_j)ᵀ G` for every generator, exactly.
pub fn verify_gram_adjoint(n: usize, d: usize) -> Result<VerificationReport> {
    let m = StandardModule::new(n, d)?;
    let g = m.gram();
    let mut rep = VerificationReport::new("gram_adjoint", &[("n", serde_json::json!(n)), ("d", serde_json::json!(d))]);
    for j in 1..n {
        let e = m.representation_matrix(&TLElement::from_diagram(Diagram::generator(n, j)?))?;
        let ok = &g * &e == &e.transpose() * &g;
        rep.record(ok, || format!("G·ρ(e_{j}) differs from ρ(e_{j})ᵀ·G"));
    }
    Ok(rep)
}
