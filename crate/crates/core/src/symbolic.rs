//! Symbols, finite words and locally constant potentials on the full shift.
//!
//! A potential with memory `m` is a table of real values indexed by words of
//! length `m`; evaluating it on a longer word reads exactly the first `m`
//! symbols. Words double as cylinders: the word `w` stands for the set of
//! infinite sequences beginning with `w`, and the empty word is the whole
//! space.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Ordered finite alphabet. Symbol indices are positions in the label list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: Vec<S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Format(format!(
                "alphabet needs at least 2 symbols, got {}",
                labels.len()
            )));
        }
        if labels.len() > 255 {
            return Err(Error::Format("alphabet larger than 255 symbols".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::Format("empty symbol label".into()));
            }
            if labels[..i].contains(l) {
                return Err(Error::Format(format!("duplicate symbol label {l:?}")));
            }
        }
        Ok(Alphabet { labels })
    }

    /// The spin alphabet {+, -}.
    pub fn spin() -> Self {
        Alphabet {
            labels: vec!["+".into(), "-".into()],
        }
    }

    /// The q-state alphabet with labels "1".."q".
    pub fn potts(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Usage(format!(
                "potts alphabet needs q >= 2, got {q}"
            )));
        }
        Alphabet::new((1..=q).map(|k| k.to_string()).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<u8> {
        self.labels.iter().position(|l| l == label).map(|i| i as u8)
    }

    /// Number of words of a given length, or a capacity error past `cap`.
    pub fn word_count(&self, len: usize, cap: u64) -> Result<u64> {
        let q = self.len() as u64;
        let mut n: u64 = 1;
        for _ in 0..len {
            n = n
                .checked_mul(q)
                .filter(|&n| n <= cap)
                .ok_or_else(|| Error::Capacity(format!("q^{len} exceeds cap {cap}")))?;
        }
        Ok(n)
    }

    /// Decode the big-endian rank of a word of the given length.
    pub fn word_from_rank(&self, mut rank: u64, len: usize) -> Word {
        let q = self.len() as u64;
        let mut idx = vec![0u8; len];
        for i in (0..len).rev() {
            idx[i] = (rank % q) as u8;
            rank /= q;
        }
        Word { idx }
    }

    /// All words of a fixed length, in big-endian rank order.
    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = Word> + '_ {
        let count = (self.len() as u64).pow(len as u32);
        (0..count).map(move |r| self.word_from_rank(r, len))
    }

    /// Parse a concatenation of symbol labels into a word. The parse must be
    /// unique; ambiguous concatenations are rejected.
    pub fn word_from_str(&self, s: &str) -> Result<Word> {
        // one parse-state per byte offset: (number of parses, best predecessor)
        let bytes = s.as_bytes();
        let n = bytes.len();
        let mut count = vec![0u64; n + 1];
        let mut back: Vec<Option<(usize, u8)>> = vec![None; n + 1];
        count[0] = 1;
        for pos in 0..n {
            if count[pos] == 0 {
                continue;
            }
            for (i, label) in self.labels.iter().enumerate() {
                let lb = label.as_bytes();
                if bytes[pos..].starts_with(lb) {
                    let next = pos + lb.len();
                    count[next] = count[next].saturating_add(count[pos]);
                    back[next] = Some((pos, i as u8));
                }
            }
        }
        match count[n] {
            0 => Err(Error::Format(format!(
                "cannot parse {s:?} over alphabet {:?}",
                self.labels
            ))),
            1 => {
                let mut idx = Vec::new();
                let mut pos = n;
                while pos > 0 {
                    let (prev, sym) = back[pos].unwrap();
                    idx.push(sym);
                    pos = prev;
                }
                idx.reverse();
                Ok(Word { idx })
            }
            _ => Err(Error::Format(format!(
                "ambiguous word {s:?} over alphabet {:?}",
                self.labels
            ))),
        }
    }

    /// Render a word as concatenated labels.
    pub fn format_word(&self, w: &Word) -> String {
        w.symbols()
            .iter()
            .map(|&i| self.label(i as usize))
            .collect()
    }
}

/// A finite word of symbol indices. Doubles as the cylinder of sequences
/// starting with it; the empty word is the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    idx: Vec<u8>,
}

impl Word {
    pub fn new(idx: Vec<u8>, alphabet: &Alphabet) -> Result<Self> {
        let q = alphabet.len() as u8;
        if let Some(&bad) = idx.iter().find(|&&i| i >= q) {
            return Err(Error::Format(format!(
                "symbol index {bad} out of range for q = {q}"
            )));
        }
        Ok(Word { idx })
    }

    pub fn empty() -> Self {
        Word { idx: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.idx
    }

    /// Word extended by one symbol on the right.
    pub fn append(&self, sym: u8) -> Word {
        let mut idx = self.idx.clone();
        idx.push(sym);
        Word { idx }
    }

    /// Word extended by one symbol on the left.
    pub fn prepend(&self, sym: u8) -> Word {
        let mut idx = Vec::with_capacity(self.idx.len() + 1);
        idx.push(sym);
        idx.extend_from_slice(&self.idx);
        Word { idx }
    }
}

impl From<&[u8]> for Word {
    fn from(idx: &[u8]) -> Self {
        Word { idx: idx.to_vec() }
    }
}

/// A potential that depends on the first `memory` symbols only, stored as a
/// dense table over words of that length. The big-endian rank of the word is
/// the table index.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential {
    alphabet: Alphabet,
    memory: usize,
    table: Vec<f64>,
    sup_norm: f64,
}

impl LocallyConstantPotential {
    /// Validate and wrap a value table. The table length must be q^memory and
    /// every entry finite.
    pub fn from_table(alphabet: Alphabet, memory: usize, table: Vec<f64>) -> Result<Self> {
        if memory < 1 {
            return Err(Error::Format("memory must be at least 1".into()));
        }
        let expected = alphabet.word_count(memory, u64::MAX / 2)? as usize;
        if table.len() != expected {
            return Err(Error::Format(format!(
                "table has {} entries, expected q^m = {}",
                table.len(),
                expected
            )));
        }
        if let Some(bad) = table.iter().find(|v| !v.is_finite()) {
            return Err(Error::Value(format!("non-finite table entry {bad}")));
        }
        let sup_norm = table.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Ok(LocallyConstantPotential {
            alphabet,
            memory,
            table,
            sup_norm,
        })
    }

    /// The spin observable on {+,-}: +1 on the cylinder [+], -1 on [-].
    pub fn cw() -> Self {
        LocallyConstantPotential::from_table(Alphabet::spin(), 1, vec![1.0, -1.0]).unwrap()
    }

    /// Indicator of the k-th symbol (1-based) over the q-state alphabet.
    pub fn potts_indicator(q: usize, k: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Usage(format!(
                "potts_indicator needs q >= 2, got {q}"
            )));
        }
        if k < 1 || k > q {
            return Err(Error::Usage(format!(
                "potts_indicator symbol k = {k} outside 1..={q}"
            )));
        }
        let mut table = vec![0.0; q];
        table[k - 1] = 1.0;
        LocallyConstantPotential::from_table(Alphabet::potts(q)?, 1, table)
    }

    /// Seeded random table with entries uniform in [-1, 1).
    pub fn random(alphabet: Alphabet, memory: usize, seed: u64) -> Result<Self> {
        let size = alphabet.word_count(memory, 1 << 26)? as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<f64> = (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect();
        LocallyConstantPotential::from_table(alphabet, memory, table)
    }

    /// The potential with every table entry negated.
    pub fn negated(&self) -> Self {
        let table = self.table.iter().map(|v| -v).collect();
        LocallyConstantPotential {
            alphabet: self.alphabet.clone(),
            memory: self.memory,
            table,
            sup_norm: self.sup_norm,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn memory(&self) -> usize {
        self.memory
    }

    /// The sup norm of the table.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    /// Big-endian rank of the first `memory` symbols of a block.
    #[inline]
    pub fn word_index(&self, block: &[u8]) -> usize {
        debug_assert!(block.len() >= self.memory);
        let q = self.alphabet.len();
        let mut r = 0usize;
        for &s in &block[..self.memory] {
            r = r * q + s as usize;
        }
        r
    }

    /// Value on any block of length >= memory (reads the first `memory`
    /// symbols).
    #[inline]
    pub fn eval(&self, block: &[u8]) -> f64 {
        self.table[self.word_index(block)]
    }

    /// Birkhoff sum along the first n windows of a word:
    /// Σ_{i=0}^{n-1} ψ(w_i ... w_{i+m-1}). The word must carry n + m - 1
    /// symbols.
    pub fn birkhoff_sum(&self, w: &Word, n: usize) -> Result<f64> {
        if n < 1 {
            return Err(Error::Usage(format!("birkhoff_sum needs n >= 1, got {n}")));
        }
        let need = n + self.memory - 1;
        if w.len() < need {
            return Err(Error::Length(format!(
                "word of length {} too short for n = {} with memory {} (need {})",
                w.len(),
                n,
                self.memory,
                need
            )));
        }
        let sym = w.symbols();
        let mut s = 0.0;
        for i in 0..n {
            s += self.eval(&sym[i..i + self.memory]);
        }
        Ok(s)
    }

    /// Mean-field Hamiltonian -(1/(2n)) (S_n ψ)^2 on the first n windows.
    pub fn hamiltonian(&self, w: &Word, n: usize) -> Result<f64> {
        let s = self.birkhoff_sum(w, n)?;
        Ok(-s * s / (2.0 * n as f64))
    }

    /// Same table re-indexed over longer words; evaluation is unchanged.
    pub fn lift(&self, memory: usize) -> Self {
        assert!(memory >= self.memory);
        if memory == self.memory {
            return self.clone();
        }
        let q = self.alphabet.len();
        let extra = q.pow((memory - self.memory) as u32);
        let mut table = Vec::with_capacity(self.table.len() * extra);
        for &v in &self.table {
            table.extend(std::iter::repeat_n(v, extra));
        }
        LocallyConstantPotential {
            alphabet: self.alphabet.clone(),
            memory,
            table,
            sup_norm: self.sup_norm,
        }
    }

    /// Serialize as the potential JSON document. Keys are emitted in table
    /// order and floats with 17 significant digits, so the output is
    /// deterministic and reload-exact.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n  \"alphabet\": [");
        for (i, l) in self.alphabet.labels().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&serde_json::to_string(l).unwrap());
        }
        out.push_str(&format!(
            "],\n  \"memory\": {},\n  \"values\": {{\n",
            self.memory
        ));
        let count = self.table.len() as u64;
        for rank in 0..count {
            let w = self.alphabet.word_from_rank(rank, self.memory);
            let key = self.alphabet.format_word(&w);
            out.push_str(&format!(
                "    {}: {:.16e}{}\n",
                serde_json::to_string(&key).unwrap(),
                self.table[rank as usize],
                if rank + 1 < count { "," } else { "" }
            ));
        }
        out.push_str("  }\n}\n");
        out
    }

    /// Parse the potential JSON document. Every word of the declared length
    /// must appear exactly once.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| Error::Format(format!("invalid potential JSON: {e}")))?;
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format("potential JSON must be an object".into()))?;
        let labels = obj
            .get("alphabet")
            .and_then(|a| a.as_array())
            .ok_or_else(|| Error::Format("missing \"alphabet\" array".into()))?
            .iter()
            .map(|l| {
                l.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Format("alphabet labels must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let alphabet = Alphabet::new(labels)?;
        let memory = obj
            .get("memory")
            .and_then(|m| m.as_u64())
            .ok_or_else(|| Error::Format("missing integer \"memory\"".into()))?
            as usize;
        if memory < 1 {
            return Err(Error::Format("memory must be at least 1".into()));
        }
        let values = obj
            .get("values")
            .and_then(|m| m.as_object())
            .ok_or_else(|| Error::Format("missing \"values\" object".into()))?;
        let size = alphabet.word_count(memory, 1 << 26)? as usize;
        if values.len() != size {
            return Err(Error::Format(format!(
                "values has {} entries, expected q^m = {}",
                values.len(),
                size
            )));
        }
        let mut table = vec![f64::NAN; size];
        let mut seen = vec![false; size];
        for (key, val) in values {
            let w = alphabet.word_from_str(key)?;
            if w.len() != memory {
                return Err(Error::Format(format!(
                    "key {key:?} has length {}, expected {}",
                    w.len(),
                    memory
                )));
            }
            let x = val
                .as_f64()
                .ok_or_else(|| Error::Value(format!("value for {key:?} is not a number")))?;
            let mut rank = 0usize;
            for &s in w.symbols() {
                rank = rank * alphabet.len() + s as usize;
            }
            if seen[rank] {
                return Err(Error::Format(format!("duplicate key {key:?}")));
            }
            seen[rank] = true;
            table[rank] = x;
        }
        if let Some(rank) = seen.iter().position(|&s| !s) {
            let w = alphabet.word_from_rank(rank as u64, memory);
            return Err(Error::Format(format!(
                "missing value for word {:?}",
                alphabet.format_word(&w)
            )));
        }
        LocallyConstantPotential::from_table(alphabet, memory, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn memory2_match() -> LocallyConstantPotential {
        // psi(ab) = 1 iff a == b else 0
        LocallyConstantPotential::from_table(
            Alphabet::potts(2).unwrap(),
            2,
            vec![1.0, 0.0, 0.0, 1.0],
        )
        .unwrap()
    }

    #[test]
    fn birkhoff_zero_potential() {
        let zero =
            LocallyConstantPotential::from_table(Alphabet::spin(), 1, vec![0.0, 0.0]).unwrap();
        let w = Word::new(vec![0, 1, 0, 1], zero.alphabet()).unwrap();
        for n in 1..=4 {
            assert_eq!(zero.birkhoff_sum(&w, n).unwrap(), 0.0);
            assert_eq!(zero.hamiltonian(&w, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn birkhoff_cw_direct_sum() {
        let cw = LocallyConstantPotential::cw();
        // (+, +, -): 1 + 1 - 1
        let w = Word::new(vec![0, 0, 1], cw.alphabet()).unwrap();
        assert_eq!(cw.birkhoff_sum(&w, 3).unwrap(), 1.0);
    }

    #[test]
    fn birkhoff_memory2_direct_sum() {
        let pot = memory2_match();
        // pairs 00, 01, 11 -> 1 + 0 + 1
        let w = Word::new(vec![0, 0, 1, 1], pot.alphabet()).unwrap();
        assert_eq!(pot.birkhoff_sum(&w, 3).unwrap(), 2.0);
    }

    #[test]
    fn birkhoff_word_too_short() {
        let pot = memory2_match();
        let w = Word::new(vec![0, 1], pot.alphabet()).unwrap();
        assert!(matches!(pot.birkhoff_sum(&w, 2), Err(Error::Length(_))));
    }

    #[test]
    fn hamiltonian_cw_values() {
        let cw = LocallyConstantPotential::cw();
        let pp = Word::new(vec![0, 0], cw.alphabet()).unwrap();
        let pm = Word::new(vec![0, 1], cw.alphabet()).unwrap();
        assert_eq!(cw.hamiltonian(&pp, 2).unwrap(), -1.0);
        assert_eq!(cw.hamiltonian(&pm, 2).unwrap(), 0.0);
    }

    #[test]
    fn builtin_cw_sup_norm() {
        assert_eq!(LocallyConstantPotential::cw().sup_norm(), 1.0);
    }

    #[test]
    fn builtin_potts_indicator() {
        let pot = LocallyConstantPotential::potts_indicator(3, 2).unwrap();
        assert_eq!(pot.eval(&[1]), 1.0);
        assert_eq!(pot.eval(&[0]), 0.0);
        assert_eq!(pot.eval(&[2]), 0.0);
    }

    #[test]
    fn from_table_size_mismatch() {
        let r = LocallyConstantPotential::from_table(
            Alphabet::potts(2).unwrap(),
            2,
            vec![1.0, 2.0, 3.0],
        );
        assert!(matches!(r, Err(Error::Format(_))));
    }

    #[test]
    fn from_table_rejects_non_finite() {
        let r = LocallyConstantPotential::from_table(Alphabet::spin(), 1, vec![1.0, f64::NAN]);
        assert!(matches!(r, Err(Error::Value(_))));
    }

    #[test]
    fn lift_preserves_evaluation() {
        let cw = LocallyConstantPotential::cw();
        let lifted = cw.lift(2);
        assert_eq!(lifted.memory(), 2);
        assert_eq!(lifted.sup_norm(), 1.0);
        for w in cw.alphabet().words_of_length(2) {
            assert_eq!(lifted.eval(w.symbols()), cw.eval(w.symbols()));
        }
    }

    #[test]
    fn json_round_trip_identical() {
        let pot = LocallyConstantPotential::random(Alphabet::spin(), 2, 7).unwrap();
        let json = pot.to_json();
        let back = LocallyConstantPotential::from_json(&json).unwrap();
        assert_eq!(back.table(), pot.table());
        assert_eq!(back.memory(), pot.memory());
        assert_eq!(back.alphabet(), pot.alphabet());
    }

    #[test]
    fn json_rejects_missing_word() {
        let s = r#"{"alphabet": ["+","-"], "memory": 1, "values": {"+": 1.0}}"#;
        assert!(matches!(
            LocallyConstantPotential::from_json(s),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn word_parsing_spin_aliases() {
        let a = Alphabet::spin();
        let w = a.word_from_str("++-").unwrap();
        assert_eq!(w.symbols(), &[0, 0, 1]);
        assert_eq!(a.format_word(&w), "++-");
    }

    #[test]
    fn word_parsing_rejects_ambiguity() {
        let a = Alphabet::new(vec!["a", "aa"]).unwrap();
        assert!(matches!(a.word_from_str("aaa"), Err(Error::Format(_))));
        // unambiguous prefix parse still works
        assert!(a.word_from_str("a").is_ok());
    }

    #[test]
    fn words_of_length_enumerates_in_rank_order() {
        let a = Alphabet::potts(3).unwrap();
        let all: Vec<Word> = a.words_of_length(2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0].symbols(), &[0, 0]);
        assert_eq!(all[5].symbols(), &[1, 2]);
        assert_eq!(all[8].symbols(), &[2, 2]);
    }
}
