//! s-state k-symbol Turing machines: enumeration, decoding, and simulation.
//!
//! A machine class TM(s,k) holds every total transition map
//! (state, read symbol) -> (next state, write symbol, head move), which gives
//! (2sk)^(sk) machines. Machines never halt; a run performs a fixed number of
//! transitions and the output is the tape content over every cell the head
//! visited.
//!
//! The index <-> table bijection used here is pinned by this crate: the index
//! is written in base 2sk as s*k digits, the most significant digit belonging
//! to key (state 1, symbol 0) and keys ordered state-major, symbol-minor.
//! A digit v decodes as: move right if v is even, left if odd; r = v / 2;
//! write symbol = r mod k; next state = r / k + 1.

use crate::error::{Error, Result};

/// A machine class TM(states, symbols).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmClass {
    states: u8,
    symbols: u8,
}

impl TmClass {
    pub fn new(states: u8, symbols: u8) -> Result<Self> {
        if states < 1 {
            return Err(Error::InvalidMachineClass {
                states,
                symbols,
                reason: "at least one state required",
            });
        }
        if symbols < 2 {
            return Err(Error::InvalidMachineClass {
                states,
                symbols,
                reason: "at least two symbols required",
            });
        }
        Ok(TmClass { states, symbols })
    }

    #[inline]
    pub fn states(self) -> u8 {
        self.states
    }

    #[inline]
    pub fn symbols(self) -> u8 {
        self.symbols
    }

    /// Number of (state, symbol) keys in a transition table.
    #[inline]
    pub fn entry_count(self) -> usize {
        self.states as usize * self.symbols as usize
    }

    /// Number of choices per table entry, also the digit base of the
    /// index encoding.
    #[inline]
    fn digit_base(self) -> u64 {
        2 * self.states as u64 * self.symbols as u64
    }

    /// Size of the machine space, (2sk)^(sk). Fails explicitly when the
    /// count does not fit in 64 bits; it never wraps.
    pub fn space_size(self) -> Result<u64> {
        let exp = u32::try_from(self.entry_count()).expect("entry count fits u32");
        self.digit_base()
            .checked_pow(exp)
            .ok_or(Error::SpaceSizeOverflow {
                states: self.states,
                symbols: self.symbols,
            })
    }
}

impl std::fmt::Display for TmClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TM({},{})", self.states, self.symbols)
    }
}

/// Position of a machine in the enumeration of its class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MachineIndex {
    class: TmClass,
    index: u64,
}

impl MachineIndex {
    pub fn new(class: TmClass, index: u64) -> Result<Self> {
        let space = class.space_size()?;
        if index >= space {
            return Err(Error::IndexOutOfRange { index, space });
        }
        Ok(MachineIndex { class, index })
    }

    #[inline]
    pub fn class(self) -> TmClass {
        self.class
    }

    #[inline]
    pub fn index(self) -> u64 {
        self.index
    }
}

/// Head movement, one cell per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    #[inline]
    pub fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
        }
    }

    pub fn flipped(self) -> Move {
        match self {
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::Left => write!(f, "-1"),
            Move::Right => write!(f, "+1"),
        }
    }
}

/// One table entry: what the head does on a given (state, read symbol) key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next_state: u8,
    pub write: u8,
    pub movement: Move,
}

/// A complete machine: one transition per (state, symbol) key.
///
/// Entries are stored state-major, symbol-minor, i.e. slot
/// `(state - 1) * symbols + symbol`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionTable {
    class: TmClass,
    entries: Vec<Transition>,
}

impl TransitionTable {
    /// Builds the table at the given enumeration index.
    pub fn decode(machine: MachineIndex) -> TransitionTable {
        let class = machine.class;
        let base = class.digit_base();
        let n = class.entry_count();
        let k = class.symbols as u64;

        // Digits come out least significant first; entry 0 owns the most
        // significant digit.
        let mut entries = vec![
            Transition {
                next_state: 1,
                write: 0,
                movement: Move::Right,
            };
            n
        ];
        let mut rest = machine.index;
        for slot in (0..n).rev() {
            let digit = rest % base;
            rest /= base;
            let movement = if digit.is_multiple_of(2) {
                Move::Right
            } else {
                Move::Left
            };
            let r = digit / 2;
            entries[slot] = Transition {
                next_state: (r / k) as u8 + 1,
                write: (r % k) as u8,
                movement,
            };
        }
        TransitionTable { class, entries }
    }

    /// Builds a table from explicit entries in state-major, symbol-minor
    /// order, validating every target.
    pub fn from_entries(class: TmClass, entries: Vec<Transition>) -> Result<TransitionTable> {
        // The class must be encodable or the table has no index.
        class.space_size()?;
        if entries.len() != class.entry_count() {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, got {}",
                class.entry_count(),
                entries.len()
            )));
        }
        for (slot, t) in entries.iter().enumerate() {
            if t.next_state < 1 || t.next_state > class.states {
                return Err(Error::InvalidTable(format!(
                    "entry {slot}: next state {} outside 1..={}",
                    t.next_state, class.states
                )));
            }
            if t.write >= class.symbols {
                return Err(Error::InvalidTable(format!(
                    "entry {slot}: write symbol {} outside alphabet of {}",
                    t.write, class.symbols
                )));
            }
        }
        Ok(TransitionTable { class, entries })
    }

    /// The exact inverse of [`TransitionTable::decode`].
    pub fn encode(&self) -> MachineIndex {
        let base = self.class.digit_base();
        let k = self.class.symbols as u64;
        let mut index = 0u64;
        for t in &self.entries {
            let r = (t.next_state as u64 - 1) * k + t.write as u64;
            let digit = r * 2
                + match t.movement {
                    Move::Right => 0,
                    Move::Left => 1,
                };
            index = index * base + digit;
        }
        MachineIndex {
            class: self.class,
            index,
        }
    }

    /// Same machine with every head move negated.
    pub fn mirrored(&self) -> TransitionTable {
        let entries = self
            .entries
            .iter()
            .map(|t| Transition {
                movement: t.movement.flipped(),
                ..*t
            })
            .collect();
        TransitionTable {
            class: self.class,
            entries,
        }
    }

    #[inline]
    pub fn class(&self) -> TmClass {
        self.class
    }

    /// Transition fired in `state` (1-based) when reading `symbol`.
    #[inline]
    pub fn entry(&self, state: u8, symbol: u8) -> Transition {
        self.entries[(state as usize - 1) * self.class.symbols as usize + symbol as usize]
    }

    /// Canonical text form, one `state,read -> state',write,move` line per
    /// entry in key order.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for state in 1..=self.class.states {
            for symbol in 0..self.class.symbols {
                let t = self.entry(state, symbol);
                out.push_str(&format!(
                    "{},{} -> {},{},{}\n",
                    state, symbol, t.next_state, t.write, t.movement
                ));
            }
        }
        out
    }
}

/// A two-way-unbounded tape: a background symbol everywhere except a finite
/// explicitly-set window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tape {
    background: u8,
    start: i64,
    cells: Vec<u8>,
}

impl Tape {
    /// Uniform tape with no explicit cells.
    pub fn blank(background: u8) -> Tape {
        Tape {
            background,
            start: 0,
            cells: Vec::new(),
        }
    }

    /// Tape equal to `cells` on `[start, start + cells.len())` and to
    /// `background` everywhere else.
    pub fn with_window(background: u8, start: i64, cells: Vec<u8>) -> Tape {
        Tape {
            background,
            start,
            cells,
        }
    }

    #[inline]
    pub fn background(&self) -> u8 {
        self.background
    }

    /// Number of explicitly-set cells.
    pub fn window_len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn read(&self, pos: i64) -> u8 {
        if pos >= self.start && pos < self.start + self.cells.len() as i64 {
            self.cells[(pos - self.start) as usize]
        } else {
            self.background
        }
    }
}

/// Everything observable about one fixed-budget run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    pub machine: MachineIndex,
    pub steps_run: u32,
    pub leftmost_visited: i64,
    pub rightmost_visited: i64,
    /// Final tape content over the visited span, left to right, as symbol
    /// values.
    pub output: Vec<u8>,
}

/// Runs `table` on `input` for exactly `steps` transitions, starting in
/// state 1 with the head on cell 0.
///
/// The visited set is every cell the head occupied at any time from 0 to
/// `steps` inclusive, so it contains the final post-move position even when
/// no transition fired there. Pure: identical arguments give a bit-identical
/// result on any thread.
pub fn simulate(table: &TransitionTable, input: &Tape, steps: u32) -> SimResult {
    // The head can reach at most `steps` cells from the origin, so a dense
    // buffer over [-steps, steps] covers every read and write.
    let radius = steps as i64;
    let width = 2 * radius as usize + 1;
    let mut tape = vec![input.background; width];
    for (offset, cell) in tape.iter_mut().enumerate() {
        let pos = offset as i64 - radius;
        *cell = input.read(pos);
    }

    let mut pos = 0i64;
    let mut state = 1u8;
    let mut leftmost = 0i64;
    let mut rightmost = 0i64;
    for _ in 0..steps {
        let slot = (pos + radius) as usize;
        let t = table.entry(state, tape[slot]);
        tape[slot] = t.write;
        pos += t.movement.offset();
        state = t.next_state;
        if pos < leftmost {
            leftmost = pos;
        } else if pos > rightmost {
            rightmost = pos;
        }
    }

    let lo = (leftmost + radius) as usize;
    let hi = (rightmost + radius) as usize;
    SimResult {
        machine: table.encode(),
        steps_run: steps,
        leftmost_visited: leftmost,
        rightmost_visited: rightmost,
        output: tape[lo..=hi].to_vec(),
    }
}
