//! Reduced words for the longest element, braid moves and paths between words.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootdata::{CartanDatum, Family};

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.txt");

/// Weyl group element stored as its action on the simple roots: column `j`
/// is the image of `alpha_j` in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    cols: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let cols = (0..rank)
            .map(|j| {
                let mut c = vec![0; rank];
                c[j] = 1;
                c
            })
            .collect();
        WeylElement { cols }
    }

    /// Image of the simple root `alpha_j` (dense index).
    pub fn image(&self, j: usize) -> &[i64] {
        &self.cols[j]
    }

    fn image_is_positive(&self, j: usize) -> bool {
        self.cols[j].iter().all(|&c| c >= 0)
    }

    /// `self * s_i`.
    pub fn mul_simple(&mut self, datum: &CartanDatum, i: usize) {
        // (w s_i)(alpha_j) = w(alpha_j) - a_{ji} w(alpha_i)
        let wi = self.cols[i].clone();
        for j in 0..self.cols.len() {
            let a = datum.cartan()[j][i];
            if a != 0 {
                for (x, y) in self.cols[j].iter_mut().zip(&wi) {
                    *x -= a * y;
                }
            }
        }
    }

    /// `s_i * self`.
    pub fn simple_mul(&mut self, datum: &CartanDatum, i: usize) {
        for c in self.cols.iter_mut() {
            datum.reflect(i, c);
        }
    }

    pub fn from_letters(datum: &CartanDatum, letters: &[u8]) -> Result<Self> {
        let mut w = WeylElement::identity(datum.rank());
        for &l in letters {
            w.mul_simple(datum, datum.index_of(l)?);
        }
        Ok(w)
    }

    /// Right descent test: `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        !self.image_is_positive(i)
    }

    fn inverse(&self, datum: &CartanDatum) -> Self {
        let word = self.reduced_letters(datum);
        let mut inv = WeylElement::identity(datum.rank());
        for &l in word.iter().rev() {
            inv.mul_simple(datum, datum.index_of(l).unwrap());
        }
        inv
    }

    /// `l(s_i w) < l(w)`.
    pub fn has_left_descent(&self, datum: &CartanDatum, i: usize) -> bool {
        self.inverse(datum).has_right_descent(i)
    }

    /// A reduced word, peeling right descents with the largest label first.
    pub fn reduced_letters(&self, datum: &CartanDatum) -> Vec<u8> {
        let mut w = self.clone();
        let mut rev = Vec::new();
        while let Some(i) = (0..datum.rank()).rev().find(|&i| w.has_right_descent(i)) {
            rev.push(datum.label(i));
            w.mul_simple(datum, i);
        }
        rev.reverse();
        rev
    }
}

/// True iff the word is reduced.
pub fn is_reduced(datum: &CartanDatum, letters: &[u8]) -> bool {
    let mut w = WeylElement::identity(datum.rank());
    for &l in letters {
        let Ok(i) = datum.index_of(l) else {
            return false;
        };
        if w.has_right_descent(i) {
            return false;
        }
        w.mul_simple(datum, i);
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// `s_i s_j = s_j s_i` for non-adjacent nodes.
    Commutation,
    /// `s_i s_j s_i = s_j s_i s_j` for adjacent nodes.
    Braid,
}

impl MoveKind {
    /// Number of letters the move rewrites.
    pub fn span(self) -> usize {
        match self {
            MoveKind::Commutation => 2,
            MoveKind::Braid => 3,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MoveKind::Commutation => "commutation",
            MoveKind::Braid => "braid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidMove {
    pub position: usize,
    pub kind: MoveKind,
}

impl BraidMove {
    pub fn commutation(position: usize) -> Self {
        BraidMove {
            position,
            kind: MoveKind::Commutation,
        }
    }

    pub fn braid(position: usize) -> Self {
        BraidMove {
            position,
            kind: MoveKind::Braid,
        }
    }
}

impl fmt::Display for BraidMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.kind.name(), self.position)
    }
}

/// Check a move against raw letters and perform it in place.
fn apply_in_place(datum: &CartanDatum, letters: &mut [u8], mv: BraidMove) -> Result<()> {
    let p = mv.position;
    let err = |reason: String| Error::MoveNotApplicable {
        position: p,
        kind: mv.kind.name(),
        reason,
    };
    if p + mv.kind.span() > letters.len() {
        return Err(err("past the end of the word".into()));
    }
    match mv.kind {
        MoveKind::Commutation => {
            let (a, b) = (letters[p], letters[p + 1]);
            if a == b || datum.adjacent(a, b) {
                return Err(err(format!("letters {a},{b} do not commute")));
            }
            letters.swap(p, p + 1);
        }
        MoveKind::Braid => {
            let (a, b, c) = (letters[p], letters[p + 1], letters[p + 2]);
            if a != c || !datum.adjacent(a, b) {
                return Err(err(format!(
                    "letters {a},{b},{c} are not of the form i,j,i with i-j adjacent"
                )));
            }
            letters[p] = b;
            letters[p + 1] = a;
            letters[p + 2] = b;
        }
    }
    Ok(())
}

/// A reduced word over a Cartan datum.
#[derive(Debug, Clone)]
pub struct ReducedWord {
    datum: Arc<CartanDatum>,
    letters: Vec<u8>,
}

impl PartialEq for ReducedWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && self.datum.name() == other.datum.name()
    }
}

impl Eq for ReducedWord {}

impl ReducedWord {
    /// Validate reducedness.
    pub fn new(datum: Arc<CartanDatum>, letters: Vec<u8>) -> Result<Self> {
        for &l in &letters {
            datum.index_of(l)?;
        }
        if !is_reduced(&datum, &letters) {
            return Err(Error::NotReduced(format_letters(&letters)));
        }
        Ok(ReducedWord { datum, letters })
    }

    /// Validate that the word is a reduced word of the longest element.
    pub fn longest(datum: Arc<CartanDatum>, letters: Vec<u8>) -> Result<Self> {
        let expected = datum.positive_root_count();
        if letters.len() != expected {
            return Err(Error::NotLongest {
                expected,
                found: letters.len(),
            });
        }
        Self::new(datum, letters)
    }

    pub fn datum(&self) -> &Arc<CartanDatum> {
        &self.datum
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn element(&self) -> WeylElement {
        WeylElement::from_letters(&self.datum, &self.letters).expect("letters validated")
    }

    /// Number of occurrences of each letter, indexed by dense node index.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.datum.rank()];
        for &l in &self.letters {
            counts[self.datum.index_of(l).unwrap()] += 1;
        }
        counts
    }

    pub fn apply_move(&self, mv: BraidMove) -> Result<ReducedWord> {
        let mut letters = self.letters.clone();
        apply_in_place(&self.datum, &mut letters, mv)?;
        Ok(ReducedWord {
            datum: self.datum.clone(),
            letters,
        })
    }

    pub fn apply_path(&self, path: &[BraidMove]) -> Result<ReducedWord> {
        let mut letters = self.letters.clone();
        for &mv in path {
            apply_in_place(&self.datum, &mut letters, mv)?;
        }
        Ok(ReducedWord {
            datum: self.datum.clone(),
            letters,
        })
    }

    /// Moves that apply at some position of this word.
    pub fn applicable_moves(&self) -> Vec<BraidMove> {
        let l = &self.letters;
        let mut out = Vec::new();
        for p in 0..l.len().saturating_sub(1) {
            if l[p] != l[p + 1] && !self.datum.adjacent(l[p], l[p + 1]) {
                out.push(BraidMove::commutation(p));
            }
            if p + 2 < l.len() && l[p] == l[p + 2] && self.datum.adjacent(l[p], l[p + 1]) {
                out.push(BraidMove::braid(p));
            }
        }
        out
    }

    /// Lusztig position labels: `(letter, k)` with `k` counting occurrences
    /// of the letter from the right, starting at 1.
    pub fn lusztig_labels(&self) -> Vec<(u8, usize)> {
        let mut seen = [0usize; 16];
        let mut labels = vec![(0u8, 0usize); self.letters.len()];
        for (pos, &l) in self.letters.iter().enumerate().rev() {
            seen[l as usize] += 1;
            labels[pos] = (l, seen[l as usize]);
        }
        labels
    }

    /// Position of the `k`-th occurrence (from the right) of `letter`.
    pub fn position_of(&self, letter: u8, k: usize) -> Option<usize> {
        if k == 0 {
            return None;
        }
        self.letters
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &l)| l == letter)
            .nth(k - 1)
            .map(|(p, _)| p)
    }

    /// Moves bringing `letter` to the end, and the resulting word.
    pub fn move_to_end(&self, letter: u8) -> Result<(Vec<BraidMove>, ReducedWord)> {
        let n = self.letters.len();
        let mut reversed: Vec<u8> = self.letters.iter().rev().copied().collect();
        let mut rev_moves = Vec::new();
        let idx = self.datum.index_of(letter)?;
        if !self.element().has_right_descent(idx) {
            return Err(Error::NotReduced(format!(
                "{} is not a right descent of {}",
                letter,
                format_letters(&self.letters)
            )));
        }
        bring_to_front(&self.datum, &mut reversed, 0, letter, &mut rev_moves);
        let moves: Vec<BraidMove> = rev_moves
            .into_iter()
            .map(|m| BraidMove {
                position: n - m.position - m.kind.span(),
                kind: m.kind,
            })
            .collect();
        let word = self.apply_path(&moves)?;
        Ok((moves, word))
    }

    /// Moves bringing `letter` to the front, and the resulting word.
    pub fn move_to_front(&self, letter: u8) -> Result<(Vec<BraidMove>, ReducedWord)> {
        let idx = self.datum.index_of(letter)?;
        if !self.element().has_left_descent(&self.datum, idx) {
            return Err(Error::NotReduced(format!(
                "{} is not a left descent of {}",
                letter,
                format_letters(&self.letters)
            )));
        }
        let mut letters = self.letters.clone();
        let mut moves = Vec::new();
        bring_to_front(&self.datum, &mut letters, 0, letter, &mut moves);
        Ok((
            moves,
            ReducedWord {
                datum: self.datum.clone(),
                letters,
            },
        ))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

pub fn format_letters(letters: &[u8]) -> String {
    letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_letters(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u8>().map_err(|_| Error::Parse(format!("bad letter '{t}'"))))
        .collect()
}

/// Rewrite `w[start..]` with braid moves so that it starts with `c`.
/// Requires `c` to be a left descent of the element spelled by `w[start..]`.
fn bring_to_front(datum: &CartanDatum, w: &mut [u8], start: usize, c: u8, moves: &mut Vec<BraidMove>) {
    let b = w[start];
    if b == c {
        return;
    }
    // Both b and c are left descents, so the suffix has a reduced word
    // starting with the longest element of the parabolic <s_b, s_c>.
    bring_to_front(datum, w, start + 1, c, moves);
    let mv = if datum.adjacent(b, c) {
        bring_to_front(datum, w, start + 2, b, moves);
        BraidMove::braid(start)
    } else {
        BraidMove::commutation(start)
    };
    apply_in_place(datum, w, mv).expect("move is applicable by construction");
    moves.push(mv);
}

/// Sequence of moves turning `from` into `to`, aligning prefixes from the left.
pub fn braid_path(from: &ReducedWord, to: &ReducedWord) -> Result<Vec<BraidMove>> {
    if from.len() != to.len() {
        return Err(Error::NotLongest {
            expected: from.len(),
            found: to.len(),
        });
    }
    if from.element() != to.element() {
        return Err(Error::NotReduced(format!("{from} and {to} spell different elements")));
    }
    let datum = from.datum();
    let mut cur = from.letters.clone();
    let mut moves = Vec::new();
    for t in 0..cur.len() {
        if cur[t] != to.letters[t] {
            bring_to_front(datum, &mut cur, t, to.letters[t], &mut moves);
        }
    }
    debug_assert_eq!(cur, to.letters);
    Ok(moves)
}

/// All reduced words reachable by moves (the full set for the longest element).
/// Intended for small ranks; `limit` caps the search.
pub fn enumerate_words(start: &ReducedWord, limit: usize) -> Vec<ReducedWord> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.letters.clone());
    queue.push_back(start.clone());
    let mut out = Vec::new();
    while let Some(w) = queue.pop_front() {
        for mv in w.applicable_moves() {
            let next = w.apply_move(mv).unwrap();
            if seen.len() < limit && seen.insert(next.letters.clone()) {
                queue.push_back(next);
            }
        }
        out.push(w);
    }
    out
}

/// A word reached from `start` by `steps` pseudo-random moves.
pub fn random_word(start: &ReducedWord, steps: usize, mut next: impl FnMut(usize) -> usize) -> ReducedWord {
    let mut w = start.clone();
    for _ in 0..steps {
        let moves = w.applicable_moves();
        if moves.is_empty() {
            break;
        }
        w = w.apply_move(moves[next(moves.len())]).unwrap();
    }
    w
}

/// Parsed word catalog: `TYPE RANK: i1,i2,...` per line, `#` comments.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    entries: Vec<(Family, usize, Vec<u8>)>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("builtin catalog parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("missing ':' in catalog line '{line}'")))?;
            let mut parts = head.split_whitespace();
            let family: Family = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing type in '{line}'")))?
                .parse()?;
            let rank: usize = parts
                .next()
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| Error::Parse(format!("missing rank in '{line}'")))?;
            entries.push((family, rank, parse_letters(body)?));
        }
        Ok(Catalog { entries })
    }

    pub fn lookup(&self, family: Family, rank: usize) -> Option<&[u8]> {
        self.entries
            .iter()
            .find(|(f, r, _)| *f == family && *r == rank)
            .map(|(_, _, w)| w.as_slice())
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(f, r, w)| format!("{f} {r}: {}\n", format_letters(w)))
            .collect()
    }
}

/// `s_n s_{n-1} ... s_1 s_n ... s_2 ... s_n` on the chain `1 - ... - n`.
pub fn standard_a_letters(n: u8) -> Vec<u8> {
    (1..=n).flat_map(|start| (start..=n).rev()).collect()
}

/// `0 1 2 0 1 2` followed by `k (k-1) ... 3 2 0 1 2 3 ... k` for `k = 3..n-1`.
pub fn good_d_letters(n: u8) -> Vec<u8> {
    let mut w = vec![0, 1, 2, 0, 1, 2];
    for k in 3..n {
        w.extend((3..=k).rev());
        w.extend([2, 0, 1, 2]);
        w.extend(3..=k);
    }
    w
}

pub fn good_word_with(datum: &Arc<CartanDatum>, catalog: &Catalog) -> Result<ReducedWord> {
    let letters = match catalog.lookup(datum.family(), datum.rank()) {
        Some(w) => w.to_vec(),
        None => match datum.family() {
            Family::A => standard_a_letters(datum.rank() as u8),
            Family::D => good_d_letters(datum.rank() as u8),
            Family::E => {
                return Err(Error::UnsupportedType {
                    family: "E".into(),
                    rank: datum.rank(),
                })
            }
        },
    };
    ReducedWord::longest(datum.clone(), letters)
}

/// The catalog ("good") reduced word of the longest element.
pub fn good_word(datum: &Arc<CartanDatum>) -> Result<ReducedWord> {
    good_word_with(datum, &Catalog::builtin())
}

/// A reduced word of the longest element ending in `letter`: the good word
/// with `letter` brought to the end.
pub fn word_ending_in(datum: &Arc<CartanDatum>, letter: u8) -> Result<ReducedWord> {
    Ok(good_word(datum)?.move_to_end(letter)?.1)
}

/// A reduced word of the longest element starting with `letter`.
pub fn word_starting_with(datum: &Arc<CartanDatum>, letter: u8) -> Result<ReducedWord> {
    Ok(good_word(datum)?.move_to_front(letter)?.1)
}

/// How the prefix `w'` of a bad word is spelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrefixSpelling {
    /// Peel right descents, largest label first.
    LargestDescent,
    /// Peel right descents, smallest label first.
    SmallestDescent,
}

/// Word of the form `w' w_A s_0`, where `w_A` is the longest element of the
/// chain obtained by deleting node 0 (spelled by the standard chain word).
/// With this word every `E_i` except the one at the node adjacent to 0 is a
/// single term.
pub fn bad_word(datum: &Arc<CartanDatum>, spelling: PrefixSpelling) -> Result<ReducedWord> {
    if datum.family() == Family::A {
        return Err(Error::UnsupportedType {
            family: "A (bad word needs a node 0)".into(),
            rank: datum.rank(),
        });
    }
    let mut tail = standard_a_letters(datum.rank() as u8 - 1);
    tail.push(0);
    let w0 = WeylElement::from_letters(datum, &good_word(datum)?.letters)?;
    // w' = w0 * tail^{-1}
    let mut prefix = w0;
    for &l in tail.iter().rev() {
        prefix.mul_simple(datum, datum.index_of(l)?);
    }
    let mut rev = Vec::new();
    loop {
        let candidates = (0..datum.rank()).filter(|&i| prefix.has_right_descent(i));
        let pick = match spelling {
            PrefixSpelling::LargestDescent => candidates.max_by_key(|&i| datum.label(i)),
            PrefixSpelling::SmallestDescent => candidates.min_by_key(|&i| datum.label(i)),
        };
        let Some(i) = pick else { break };
        rev.push(datum.label(i));
        prefix.mul_simple(datum, i);
    }
    rev.reverse();
    rev.extend(tail);
    ReducedWord::longest(datum.clone(), rev)
}
