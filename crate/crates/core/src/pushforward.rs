//! Pushforward of words along a graph map.
//!
//! For `g` in `d` variables and an anchor `c`, the map `p~(x) = p(x + c) -
//! p(c)` with `p(x) = (x, g(x))` induces `M`, sending words on `d + 1`
//! letters to tensor elements on `d` letters:
//!
//! ```text
//! M(∅)   = ∅
//! M(v·i) = Σ_j (M(v) ⧢ φ(J_ij))·j
//! ```
//!
//! where `J` is the Jacobian of `p~`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{exact_rational, MultiPoly};
use crate::words::{front_decompose, shuffle, TensorElem, Word};
use crate::Rational;

/// The graph map `x -> (x, g(x))` translated to an anchor point.
#[derive(Debug)]
pub struct GraphMap {
    d: usize,
    g: MultiPoly,
    anchor: Vec<Rational>,
    /// `∂/∂x_j g(x + anchor)`, `j = 1..d`.
    gradient: Vec<MultiPoly>,
    /// `φ` of each gradient entry.
    gradient_phi: Vec<TensorElem>,
    memo: RwLock<HashMap<Word, Arc<TensorElem>>>,
}

impl Clone for GraphMap {
    fn clone(&self) -> Self {
        GraphMap {
            d: self.d,
            g: self.g.clone(),
            anchor: self.anchor.clone(),
            gradient: self.gradient.clone(),
            gradient_phi: self.gradient_phi.clone(),
            memo: RwLock::new(self.memo.read().expect("memo lock").clone()),
        }
    }
}

impl GraphMap {
    pub fn new(g: MultiPoly, anchor: Vec<Rational>) -> Result<Self> {
        let d = g.num_vars();
        if anchor.len() != d {
            return Err(Error::usage(format!(
                "anchor of dimension {} for a polynomial in {d} variables",
                anchor.len()
            )));
        }
        let shifted = g.translate(&anchor)?;
        let gradient = (1..=d)
            .map(|j| shifted.partial(j))
            .collect::<Result<Vec<_>>>()?;
        let gradient_phi = gradient.iter().map(MultiPoly::phi).collect();
        Ok(GraphMap {
            d,
            g,
            anchor,
            gradient,
            gradient_phi,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn at_origin(g: MultiPoly) -> Self {
        let d = g.num_vars();
        Self::new(g, vec![Rational::zero(); d]).expect("dimensions agree")
    }

    /// Anchor given in floating point, converted exactly to rationals.
    pub fn with_f64_anchor(g: MultiPoly, anchor: &[f64]) -> Result<Self> {
        let exact = anchor
            .iter()
            .map(|&v| exact_rational(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(g, exact)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn g(&self) -> &MultiPoly {
        &self.g
    }

    pub fn anchor(&self) -> &[Rational] {
        &self.anchor
    }

    /// `g(x + anchor) - g(anchor)`.
    pub fn g_tilde(&self) -> MultiPoly {
        self.g.translate(&self.anchor).expect("dimensions agree")
    }

    /// Row `i` (1-based) of the `(d + 1) x d` Jacobian of `p~`.
    pub fn jacobian_row(&self, i: usize) -> Result<Vec<MultiPoly>> {
        if i == 0 || i > self.d + 1 {
            return Err(Error::usage(format!(
                "Jacobian row {i} outside 1..={}",
                self.d + 1
            )));
        }
        if i == self.d + 1 {
            return Ok(self.gradient.clone());
        }
        Ok((1..=self.d)
            .map(|j| {
                let c = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                MultiPoly::constant(self.d, c)
            })
            .collect())
    }

    /// `Σ_j φ(∂g~/∂x_j)·[j]`, the image of the one-letter word `[d + 1]`.
    pub fn first_letter_image(&self) -> TensorElem {
        self.m_push(&Word::letter(self.d + 1, self.d + 1).expect("in range"))
            .expect("alphabet matches")
    }

    /// `M(v)` for a word over `d + 1` letters. Prefix images are memoized
    /// and shared across calls and threads.
    pub fn m_push(&self, v: &Word) -> Result<TensorElem> {
        if v.alphabet() != self.d + 1 {
            return Err(Error::usage(format!(
                "word over {} letters pushed along a map into {} letters",
                v.alphabet(),
                self.d
            )));
        }
        Ok((*self.m_push_arc(v.letters())).clone())
    }

    /// Linear extension of [`GraphMap::m_push`].
    pub fn m_push_elem(&self, e: &TensorElem) -> Result<TensorElem> {
        let mut out = TensorElem::zero(self.d);
        for (w, c) in e.terms() {
            out = &out + &self.m_push(w)?.scale(c);
        }
        Ok(out)
    }

    fn m_push_arc(&self, letters: &[usize]) -> Arc<TensorElem> {
        let alphabet = self.d + 1;
        let key = |n: usize| Word::new(alphabet, letters[..n].to_vec()).expect("checked");
        // Longest memoized prefix.
        let (mut n, mut acc) = {
            let memo = self.memo.read().expect("memo lock");
            (0..=letters.len())
                .rev()
                .find_map(|n| memo.get(&key(n)).map(|m| (n, Arc::clone(m))))
                .unwrap_or_else(|| (0, Arc::new(TensorElem::unit(self.d))))
        };
        while n < letters.len() {
            let i = letters[n];
            let next = if i <= self.d {
                acc.concat_word(&Word::letter(self.d, i).expect("in range"))
                    .expect("alphabet matches")
            } else {
                let mut sum = TensorElem::zero(self.d);
                for (j, phi) in self.gradient_phi.iter().enumerate() {
                    if phi.is_zero() {
                        continue;
                    }
                    let term = shuffle(&acc, phi)
                        .expect("alphabet matches")
                        .concat_word(&Word::letter(self.d, j + 1).expect("in range"))
                        .expect("alphabet matches");
                    sum = &sum + &term;
                }
                sum
            };
            n += 1;
            acc = Arc::new(next);
            self.memo
                .write()
                .expect("memo lock")
                .insert(key(n), Arc::clone(&acc));
        }
        acc
    }

    /// Rewrites `M(v)` as `Σ λ_k M(v_k)` with every `v_k` containing the
    /// letter `d + 1` exactly once. The result is `Σ λ_k v_k` over `d + 1`
    /// letters.
    ///
    /// Splits `v = u·(d+1)·q` at the last occurrence and uses
    /// `M(u·(d+1)·q) = Σ_j M((u ⧢ φ(∂g~/∂x_j))·j·q)`, repeating while some
    /// word still holds `d + 1` more than once.
    pub fn single_occurrence_reduce(&self, v: &Word) -> Result<TensorElem> {
        let e = self.d + 1;
        if v.alphabet() != e {
            return Err(Error::usage(format!(
                "word over {} letters, expected {e}",
                v.alphabet()
            )));
        }
        if v.count(e) < 2 {
            return Err(Error::domain(format!(
                "word {v} contains letter {e} fewer than twice"
            )));
        }
        let lifted: Vec<TensorElem> = self
            .gradient_phi
            .iter()
            .map(|p| p.widen(e).expect("wider alphabet"))
            .collect();
        let mut done = TensorElem::zero(e);
        let mut pending = TensorElem::from_word(v.clone());
        while !pending.is_zero() {
            let mut next = TensorElem::zero(e);
            for (w, c) in pending.terms() {
                if w.count(e) == 1 {
                    done.add_term(w.clone(), c.clone());
                    continue;
                }
                let pos = w.letters().iter().rposition(|&l| l == e).expect("has e");
                let u = TensorElem::from_word(Word::new(e, w.letters()[..pos].to_vec())?);
                let q = Word::new(e, w.letters()[pos + 1..].to_vec())?;
                for (j, phi) in lifted.iter().enumerate() {
                    if phi.is_zero() {
                        continue;
                    }
                    let tail = Word::letter(e, j + 1)?.concat(&q)?;
                    let words = shuffle(&u, phi)?.concat_word(&tail)?;
                    next = &next + &words.scale(c);
                }
            }
            pending = next;
        }
        Ok(done)
    }

    /// Terms `(c, q, r)` with `M(v) = Σ c · M([d+1]·q) ⧢ r`, where neither
    /// `q` nor `r` contains `d + 1`. Words with a single `d + 1` are moved to
    /// the front with [`front_decompose`]; repeated occurrences are first
    /// removed with [`GraphMap::single_occurrence_reduce`].
    pub fn front_terms(&self, v: &Word) -> Result<Vec<(Rational, Word, Word)>> {
        let e = self.d + 1;
        let singles = match v.count(e) {
            0 => {
                return Err(Error::domain(format!(
                    "word {v} does not contain letter {e}"
                )));
            }
            1 => TensorElem::from_word(v.clone()),
            _ => self.single_occurrence_reduce(v)?,
        };
        let mut merged: std::collections::BTreeMap<(Word, Word), Rational> = Default::default();
        for (w, c) in singles.terms() {
            for (k, q, r) in front_decompose(w, e)? {
                let narrow_q = Word::new(self.d, q.letters().to_vec())?;
                let narrow_r = Word::new(self.d, r.letters().to_vec())?;
                *merged
                    .entry((narrow_q, narrow_r))
                    .or_insert_with(Rational::zero) += k * c;
            }
        }
        Ok(merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((q, r), c)| (c, q, r))
            .collect())
    }

    /// Evaluates terms from [`GraphMap::front_terms`] back into `T(R^d)`.
    pub fn expand_front_terms(&self, terms: &[(Rational, Word, Word)]) -> Result<TensorElem> {
        let e = self.d + 1;
        let mut out = TensorElem::zero(self.d);
        for (c, q, r) in terms {
            let eq = Word::letter(e, e)?.concat(&q.widen(e)?)?;
            let image = shuffle(&self.m_push(&eq)?, &TensorElem::from_word(r.clone()))?;
            out = &out + &image.scale(c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn w(d: usize, letters: &[usize]) -> Word {
        Word::new(d, letters.to_vec()).unwrap()
    }

    fn e(d: usize, text: &str) -> TensorElem {
        TensorElem::parse(text, d).unwrap()
    }

    fn disk(anchor: [i64; 2]) -> GraphMap {
        let g = MultiPoly::parse("x1^2 + x2^2", 2).unwrap();
        GraphMap::new(g, anchor.iter().map(|&a| int(a)).collect()).unwrap()
    }

    #[test]
    fn jacobian_rows() {
        let m = disk([0, 0]);
        assert_eq!(
            m.jacobian_row(1).unwrap(),
            vec![MultiPoly::constant(2, int(1)), MultiPoly::zero(2)]
        );
        assert_eq!(
            m.jacobian_row(3).unwrap(),
            vec![
                MultiPoly::parse("2*x1", 2).unwrap(),
                MultiPoly::parse("2*x2", 2).unwrap()
            ]
        );
        let lin = GraphMap::at_origin(MultiPoly::parse("3*x1 - x2 + 7", 2).unwrap());
        assert_eq!(
            lin.jacobian_row(3).unwrap(),
            vec![
                MultiPoly::constant(2, int(3)),
                MultiPoly::constant(2, int(-1))
            ]
        );
        assert!(m.jacobian_row(0).is_err());
        assert!(m.jacobian_row(4).is_err());
    }

    #[test]
    fn m_push_examples() {
        let m = disk([0, 0]);
        assert_eq!(m.m_push(&w(3, &[1])).unwrap(), e(2, "[1]"));
        assert_eq!(m.m_push(&w(3, &[2])).unwrap(), e(2, "[2]"));
        assert_eq!(m.m_push(&w(3, &[3])).unwrap(), e(2, "2*[1,1] + 2*[2,2]"));
        assert_eq!(m.m_push(&w(3, &[])).unwrap(), TensorElem::unit(2));
        assert!(m.m_push(&w(2, &[1])).is_err());
    }

    #[test]
    fn m_push_of_13_via_shuffle() {
        for anchor in [[0, 0], [1, -1]] {
            let m = disk(anchor);
            let lhs = m.m_push(&w(3, &[1, 3])).unwrap();
            let rhs = &shuffle(
                &m.m_push(&w(3, &[3])).unwrap(),
                &m.m_push(&w(3, &[1])).unwrap(),
            )
            .unwrap()
                - &m.m_push(&w(3, &[3, 1])).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn letter_identities_exhaustive() {
        let m = disk([2, -1]);
        for v in Word::all_up_to(3, 3) {
            let mv = m.m_push(&v).unwrap();
            for i in 1..=2 {
                let vi = v.push(i).unwrap();
                let want = mv.concat_word(&w(2, &[i])).unwrap();
                assert_eq!(m.m_push(&vi).unwrap(), want, "{vi}");
            }
        }
        for i in 1..=2 {
            assert_eq!(m.m_push(&w(3, &[i])).unwrap(), e(2, &format!("[{i}]")));
        }
        // M([d+1]·w) = Σ_j φ(∂g~/∂x_j)·j·w for w over d letters.
        for word in Word::all_up_to(2, 3) {
            let v = w(3, &[3]).concat(&word.widen(3).unwrap()).unwrap();
            let mut want = TensorElem::zero(2);
            for j in 1..=2 {
                let grad = m.g_tilde().partial(j).unwrap().phi();
                let tail = w(2, &[j]).concat(&word).unwrap();
                want = &want + &grad.concat_word(&tail).unwrap();
            }
            assert_eq!(m.m_push(&v).unwrap(), want, "{v}");
        }
    }

    #[test]
    fn reduce_33_matches_worked_example() {
        let (a1, a2) = (3, -2);
        let m = disk([a1, a2]);
        let v = w(3, &[3, 3]);
        let reduced = m.single_occurrence_reduce(&v).unwrap();
        // 2 Σ_j (3jj + j3j + a_j 3j)
        let want = TensorElem::from_terms(
            3,
            [
                (int(2), w(3, &[3, 1, 1])),
                (int(2), w(3, &[1, 3, 1])),
                (int(2 * a1), w(3, &[3, 1])),
                (int(2), w(3, &[3, 2, 2])),
                (int(2), w(3, &[2, 3, 2])),
                (int(2 * a2), w(3, &[3, 2])),
            ],
        )
        .unwrap();
        assert_eq!(reduced, want);
        assert_eq!(m.m_push_elem(&reduced).unwrap(), m.m_push(&v).unwrap());

        // 2 Σ_j (-M(3jj) + M(3j) ⧢ j + a_j M(3j))
        let front = m.front_terms(&v).unwrap();
        let mut want = vec![
            (int(2 * a1), w(2, &[1]), w(2, &[])),
            (int(2 * a2), w(2, &[2]), w(2, &[])),
            (int(2), w(2, &[1]), w(2, &[1])),
            (int(2), w(2, &[2]), w(2, &[2])),
            (int(-2), w(2, &[1, 1]), w(2, &[])),
            (int(-2), w(2, &[2, 2]), w(2, &[])),
        ];
        want.sort_by(|x, y| (&x.1, &x.2).cmp(&(&y.1, &y.2)));
        assert_eq!(front, want);
        assert_eq!(m.expand_front_terms(&front).unwrap(), m.m_push(&v).unwrap());
    }

    #[test]
    fn reduce_33_linear_g() {
        let g = MultiPoly::parse("3*x1 - x2", 2).unwrap();
        let m = GraphMap::at_origin(g);
        let v = w(3, &[3, 3]);
        let reduced = m.single_occurrence_reduce(&v).unwrap();
        assert_eq!(reduced, e(3, "3*[3,1] - 1*[3,2]"));
        assert_eq!(m.m_push_elem(&reduced).unwrap(), m.m_push(&v).unwrap());
    }

    #[test]
    fn reduce_exhaustive_small() {
        let m = disk([1, -1]);
        for v in Word::all_up_to(3, 4).filter(|v| v.count(3) >= 2) {
            let reduced = m.single_occurrence_reduce(&v).unwrap();
            assert!(reduced.terms().all(|(u, _)| u.count(3) == 1), "{v}");
            assert_eq!(
                m.m_push_elem(&reduced).unwrap(),
                m.m_push(&v).unwrap(),
                "{v}"
            );
        }
        for v in Word::all_up_to(3, 4).filter(|v| v.count(3) >= 1) {
            let front = m.front_terms(&v).unwrap();
            assert_eq!(
                m.expand_front_terms(&front).unwrap(),
                m.m_push(&v).unwrap(),
                "{v}"
            );
        }
    }

    #[test]
    fn reduce_rejects_single_occurrence() {
        let m = disk([0, 0]);
        assert!(matches!(
            m.single_occurrence_reduce(&w(3, &[1, 3])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            m.front_terms(&w(3, &[1, 2])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn memo_is_consistent_across_threads() {
        let m = disk([1, 2]);
        let words: Vec<Word> = Word::all_up_to(3, 4).collect();
        let serial: Vec<TensorElem> = words.iter().map(|v| m.m_push(v).unwrap()).collect();
        let fresh = disk([1, 2]);
        let parallel: Vec<TensorElem> = std::thread::scope(|s| {
            let handles: Vec<_> = words
                .chunks(20)
                .map(|chunk| {
                    s.spawn(|| {
                        chunk
                            .iter()
                            .map(|v| fresh.m_push(v).unwrap())
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().unwrap())
                .collect()
        });
        assert_eq!(serial, parallel);
    }
}
