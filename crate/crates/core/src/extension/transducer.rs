use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::symbolic::{Address, SymbolicSubset, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub next: usize,
    pub output: Word,
}

/// Deterministic finite-state transducer from source addresses to target
/// addresses, defined on the cylinder union `domain`.
///
/// Output is emitted per input symbol, so the output of a prefix is a prefix
/// of the output of any extension.
#[derive(Debug, Clone, PartialEq)]
pub struct AddressTransducer {
    n_states: usize,
    initial: usize,
    source_symbols: usize,
    target_symbols: usize,
    table: Vec<Option<Transition>>,
    domain: SymbolicSubset,
    declared: Option<f64>,
}

impl AddressTransducer {
    /// Builds and validates a transducer from `(state, symbol, next, output)`
    /// rows.
    pub fn new(
        source_symbols: usize,
        target_symbols: usize,
        n_states: usize,
        initial: usize,
        rows: &[(usize, u16, usize, Word)],
        domain: SymbolicSubset,
    ) -> Result<Self> {
        if n_states == 0 || initial >= n_states {
            return Err(Error::Transducer("initial state out of range".to_string()));
        }
        if source_symbols == 0 || target_symbols == 0 {
            return Err(Error::Transducer("alphabets must be non-empty".to_string()));
        }
        let mut table = alloc::vec![None; n_states * source_symbols];
        for (state, symbol, next, output) in rows {
            if *state >= n_states || *next >= n_states {
                return Err(Error::Transducer(alloc::format!("state out of range in row {state}, {symbol}")));
            }
            if *symbol == 0 || *symbol as usize > source_symbols {
                return Err(Error::Transducer(alloc::format!("input symbol {symbol} out of range")));
            }
            output.validate(target_symbols).map_err(|_| Error::Transducer(alloc::format!("output ({output}) out of range")))?;
            let slot = &mut table[state * source_symbols + *symbol as usize - 1];
            if slot.is_some() {
                return Err(Error::Transducer(alloc::format!("two transitions for state {state}, symbol {symbol}")));
            }
            *slot = Some(Transition { next: *next, output: output.clone() });
        }
        domain.validate(source_symbols)?;
        let t = AddressTransducer { n_states, initial, source_symbols, target_symbols, table, domain, declared: None };
        t.check_domain()?;
        t.check_progress()?;
        Ok(t)
    }

    pub fn with_declared(mut self, lipschitz: f64) -> Self {
        self.declared = Some(lipschitz);
        self
    }

    pub fn identity(n: usize, domain: SymbolicSubset) -> Result<Self> {
        let rows: Vec<_> = (1..=n as u16).map(|a| (0, a, 0, Word::from_slice(&[a]))).collect();
        Self::new(n, n, 1, 0, &rows, domain)
    }

    /// Relabels symbol `i` as `perm[i - 1]`.
    pub fn permutation(perm: &[u16], domain: SymbolicSubset) -> Result<Self> {
        let n = perm.len();
        let mut seen = alloc::vec![false; n];
        for &p in perm {
            if p == 0 || p as usize > n || core::mem::replace(&mut seen[p as usize - 1], true) {
                return Err(Error::Transducer("not a permutation".to_string()));
            }
        }
        let rows: Vec<_> = perm.iter().enumerate().map(|(i, &p)| (0, i as u16 + 1, 0, Word::from_slice(&[p]))).collect();
        Self::new(n, n, 1, 0, &rows, domain)
    }

    /// Reads symbols in pairs `(a, b)` and emits `n (a - 1) + b`.
    pub fn grouping(n: usize, domain: SymbolicSubset) -> Result<Self> {
        let mut rows = Vec::new();
        for a in 1..=n as u16 {
            rows.push((0, a, a as usize, Word::empty()));
            for b in 1..=n as u16 {
                rows.push((a as usize, b, 0, Word::from_slice(&[(a - 1) * n as u16 + b])));
            }
        }
        Self::new(n, n * n, n + 1, 0, &rows, domain)
    }

    /// Inverse of [`AddressTransducer::grouping`]: `m` is emitted as the
    /// pair `(a, b)` with `m = n (a - 1) + b`.
    pub fn ungrouping(n: usize, domain: SymbolicSubset) -> Result<Self> {
        let n16 = n as u16;
        let rows: Vec<_> = (1..=n16 * n16).map(|m| (0, m, 0, Word::from_slice(&[(m - 1) / n16 + 1, (m - 1) % n16 + 1]))).collect();
        Self::new(n * n, n, 1, 0, &rows, domain)
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn source_symbols(&self) -> usize {
        self.source_symbols
    }

    pub fn target_symbols(&self) -> usize {
        self.target_symbols
    }

    pub fn domain(&self) -> &SymbolicSubset {
        &self.domain
    }

    pub fn declared(&self) -> Option<f64> {
        self.declared
    }

    pub fn transition(&self, state: usize, symbol: u16) -> Option<&Transition> {
        self.table.get(state * self.source_symbols + symbol as usize - 1)?.as_ref()
    }

    /// All transitions as `(state, symbol, next, output)`, ordered by state
    /// then symbol.
    pub fn rows(&self) -> impl Iterator<Item = (usize, u16, &Transition)> + '_ {
        self.table.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref().map(|t| (i / self.source_symbols, (i % self.source_symbols) as u16 + 1, t))
        })
    }

    fn step(&self, state: usize, symbol: u16) -> Result<&Transition> {
        if symbol == 0 || symbol as usize > self.source_symbols {
            return Err(Error::Transducer(alloc::format!("input symbol {symbol} out of range")));
        }
        self.transition(state, symbol)
            .ok_or_else(|| Error::Transducer(alloc::format!("no transition from state {state} on {symbol}")))
    }

    fn run_from(&self, mut state: usize, w: &[u16], out: &mut Word) -> Result<usize> {
        for &a in w {
            let t = self.step(state, a)?;
            for &b in t.output.symbols() {
                out.push(b);
            }
            state = t.next;
        }
        Ok(state)
    }

    /// Every domain word is readable, and once a domain word has been read
    /// every continuation is.
    fn check_domain(&self) -> Result<()> {
        let mut seen = alloc::vec![false; self.n_states];
        let mut stack = Vec::new();
        for w in self.domain.words() {
            let s = self.run_from(self.initial, w.symbols(), &mut Word::empty())?;
            stack.push(s);
        }
        while let Some(s) = stack.pop() {
            if core::mem::replace(&mut seen[s], true) {
                continue;
            }
            for a in 1..=self.source_symbols as u16 {
                stack.push(self.step(s, a)?.next);
            }
        }
        Ok(())
    }

    /// No cycle of silent transitions among reachable states.
    fn check_progress(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        fn dfs(t: &AddressTransducer, s: usize, mark: &mut [u8]) -> bool {
            mark[s] = 1;
            for a in 1..=t.source_symbols as u16 {
                if let Some(tr) = t.transition(s, a) {
                    if tr.output.is_empty()
                        && (mark[tr.next] == 1 || (mark[tr.next] == 0 && !dfs(t, tr.next, mark))) {
                            return false;
                        }
                }
            }
            mark[s] = 2;
            true
        }
        let mut mark = alloc::vec![0u8; self.n_states];
        for s in 0..self.n_states {
            if mark[s] == 0 && !dfs(self, s, &mut mark) {
                return Err(Error::Transducer(alloc::format!("silent cycle through state {s}")));
            }
        }
        Ok(())
    }

    /// Output on a finite word meeting the domain.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if !self.domain.intersects(w) {
            return Err(Error::Domain);
        }
        let mut out = Word::empty();
        self.run_from(self.initial, w.symbols(), &mut out)?;
        Ok(out)
    }

    /// Image of an eventually periodic address in the domain, which is again
    /// eventually periodic.
    pub fn apply_address(&self, a: &Address) -> Result<Address> {
        if !self.domain.words().iter().any(|d| a.starts_with(d)) {
            return Err(Error::Domain);
        }
        let mut prefix = Word::empty();
        let mut state = self.run_from(self.initial, a.prefix().symbols(), &mut prefix)?;
        let mut boundary: Vec<(usize, usize)> = Vec::new();
        loop {
            if let Some(&(_, at)) = boundary.iter().find(|(s, _)| *s == state) {
                let period = Word::from_slice(&prefix.symbols()[at..]);
                let head = Word::from_slice(&prefix.symbols()[..at]);
                if period.is_empty() {
                    return Err(Error::Transducer("periodic input produces finite output".to_string()));
                }
                return Ok(Address::new(head, period)?.canonical());
            }
            boundary.push((state, prefix.len()));
            state = self.run_from(state, a.period().symbols(), &mut prefix)?;
        }
    }
}
