//! One-dimensional binary cellular automata CA(t,c) evolved from a single 1
//! on a 0 background.
//!
//! A rule reads `t` cells to the left, the cell itself, and `c` cells to the
//! right (width w = t + c + 1); rule numbers follow the usual convention that
//! bit n of the number is the update for the neighborhood whose cells, read
//! left to right, spell n in binary. For CA(1,1) this is Wolfram's numbering
//! of the 256 elementary rules.
//!
//! Starting from a single 1 at position 0, row r can only be influenced by
//! the seed inside the cone [-c*r, t*r]. Cells outside that cone are pinned
//! to the background 0: evolution updates cone cells only, and every stored
//! cell beyond the cone stays 0. (An unbounded evolution would disagree for
//! the 2^(2^w - 1) rules that map the all-zero neighborhood to 1 — those
//! light up the whole background — so the cone-clipped semantics is the one
//! this crate defines and tests.)

use crate::error::{Error, Result};

/// Background cells kept on each side of the light cone in stored rows.
const MARGIN: usize = 1;

/// A neighborhood shape: `left` cells of left context, `right` of right
/// context, binary alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaClass {
    left: u8,
    right: u8,
}

impl CaClass {
    pub fn new(left: u8, right: u8) -> Result<Self> {
        let width = left as u16 + right as u16 + 1;
        if width > 5 {
            return Err(Error::UnsupportedWidth {
                width: width.min(u8::MAX as u16) as u8,
            });
        }
        Ok(CaClass { left, right })
    }

    /// The 256 nearest-neighbor rules, CA(1,1).
    pub fn elementary() -> Self {
        CaClass { left: 1, right: 1 }
    }

    #[inline]
    pub fn left(self) -> u8 {
        self.left
    }

    #[inline]
    pub fn right(self) -> u8 {
        self.right
    }

    #[inline]
    pub fn width(self) -> u8 {
        self.left + self.right + 1
    }

    /// Number of rules, 2^(2^width).
    pub fn space_size(self) -> u64 {
        1u64 << (1u32 << self.width())
    }
}

impl std::fmt::Display for CaClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CA({},{})", self.left, self.right)
    }
}

/// A numbered rule of some class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaRule {
    class: CaClass,
    number: u64,
}

impl CaRule {
    pub fn new(class: CaClass, number: u64) -> Result<Self> {
        let space = class.space_size();
        if number >= space {
            return Err(Error::RuleOutOfRange { number, space });
        }
        Ok(CaRule { class, number })
    }

    /// Elementary rule by Wolfram number.
    pub fn elementary(number: u64) -> Result<Self> {
        CaRule::new(CaClass::elementary(), number)
    }

    #[inline]
    pub fn class(self) -> CaClass {
        self.class
    }

    #[inline]
    pub fn number(self) -> u64 {
        self.number
    }

    /// Update for a neighborhood packed as an integer, leftmost cell most
    /// significant.
    #[inline]
    pub fn lookup(self, neighborhood: u32) -> u8 {
        (self.number >> neighborhood & 1) as u8
    }

    /// The rule whose table is this one composed with neighborhood reversal;
    /// it evolves to the mirror image of this rule's evolution. Defined only
    /// for symmetric neighborhoods (reflecting CA(2,1) would land in
    /// CA(1,2)).
    pub fn reflected(self) -> Result<CaRule> {
        if self.class.left != self.class.right {
            return Err(Error::AsymmetricNeighborhood {
                left: self.class.left,
                right: self.class.right,
            });
        }
        let width = self.class.width() as u32;
        let mut number = 0u64;
        for n in 0..1u32 << width {
            let mut reversed = 0u32;
            for bit in 0..width {
                reversed |= (n >> bit & 1) << (width - 1 - bit);
            }
            number |= u64::from(self.lookup(reversed)) << n;
        }
        Ok(CaRule {
            class: self.class,
            number,
        })
    }
}

/// Evolution rows from the single-1 seed. Row r is stored over the positions
/// [-c*r - MARGIN, t*r + MARGIN]; the MARGIN cells on each side stay 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeGrid {
    rule: CaRule,
    steps: u32,
    rows: Vec<Vec<u8>>,
}

impl SpaceTimeGrid {
    #[inline]
    pub fn rule(&self) -> CaRule {
        self.rule
    }

    #[inline]
    pub fn steps(&self) -> u32 {
        self.steps
    }

    /// Stored cells of row r, including the margin.
    pub fn row(&self, r: u32) -> &[u8] {
        &self.rows[r as usize]
    }

    /// Tape position of the first stored cell of row r.
    pub fn row_start(&self, r: u32) -> i64 {
        -(self.rule.class.right as i64 * r as i64) - MARGIN as i64
    }

    /// Cell at (row, position); positions outside storage are background 0.
    pub fn cell(&self, r: u32, pos: i64) -> u8 {
        let row = &self.rows[r as usize];
        let offset = pos - self.row_start(r);
        if offset >= 0 && (offset as usize) < row.len() {
            row[offset as usize]
        } else {
            0
        }
    }

    /// Rows restricted to the light cone [-c*r, t*r]; row r has
    /// (t + c) * r + 1 cells.
    pub fn light_cone_rows(&self) -> LightConeRows {
        let spread = (self.rule.class.left + self.rule.class.right) as usize;
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row[MARGIN..MARGIN + spread * r + 1].to_vec())
            .collect();
        LightConeRows {
            class: self.rule.class,
            rows,
        }
    }

    /// Rows of 0/1 text, aligned on tape position, for debugging.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let leftmost = self.row_start(self.steps);
        for (r, row) in self.rows.iter().enumerate() {
            let pad = (self.row_start(r as u32) - leftmost) as usize;
            out.push_str(&" ".repeat(pad));
            for &cell in row {
                out.push(if cell == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Light-cone contents per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LightConeRows {
    class: CaClass,
    rows: Vec<Vec<u8>>,
}

impl LightConeRows {
    #[inline]
    pub fn class(&self) -> CaClass {
        self.class
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row(&self, r: u32) -> &[u8] {
        &self.rows[r as usize]
    }
}

/// Evolves `rule` for `steps` updates from the single-1 seed.
///
/// Row r+1 is computed by applying the rule table to the width-w window
/// ending c cells right of each target cell, for every target inside the
/// light cone; reads beyond the previous row's storage see background 0.
pub fn evolve(rule: CaRule, steps: u32) -> SpaceTimeGrid {
    let t = rule.class.left as i64;
    let c = rule.class.right as i64;
    let spread = (t + c) as usize;
    let width = rule.class.width() as u32;
    let window_mask = (1u32 << width) - 1;

    let mut rows = Vec::with_capacity(steps as usize + 1);
    let mut seed = vec![0u8; 2 * MARGIN + 1];
    seed[MARGIN] = 1;
    rows.push(seed);

    for r in 0..steps as i64 {
        let prev = rows.last().expect("at least the seed row");
        let prev_start = -c * r - MARGIN as i64;
        let prev_len = prev.len() as i64;
        let read = |pos: i64| -> u32 {
            let offset = pos - prev_start;
            if offset >= 0 && offset < prev_len {
                prev[offset as usize] as u32
            } else {
                0
            }
        };

        let mut next = vec![0u8; spread * (r as usize + 1) + 2 * MARGIN + 1];
        let cone_lo = -c * (r + 1);
        let cone_hi = t * (r + 1);
        // Rolling window over the previous row: entering cell is pos + c.
        let mut window = 0u32;
        for q in cone_lo - t..cone_lo + c {
            window = (window << 1 | read(q)) & window_mask;
        }
        for pos in cone_lo..=cone_hi {
            window = (window << 1 | read(pos + c)) & window_mask;
            next[(pos - cone_lo) as usize + MARGIN] = rule.lookup(window);
        }
        rows.push(next);
    }

    SpaceTimeGrid { rule, steps, rows }
}
