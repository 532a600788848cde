use std::cmp::Ordering;

use super::monomial::Monomial;
use super::PolyError;

/// Term order on the monomials of a fixed ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GrevLex,
    GradedLex,
}

/// How a monomial order is lifted to the terms `m e_i` of a free module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleExtension {
    PositionOverTerm,
    TermOverPosition,
}

/// `Ascending` ranks basis vectors as e_1 < e_2 < ... < e_m, `Descending` the reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PositionPreference {
    Ascending,
    Descending,
}

/// A monomial order together with its module extension.
///
/// When `elimination_block` is `k > 0`, the first `k` variables form a block that is
/// compared first (by degree, then lexicographically); the remaining variables are
/// compared with `kind`. Such orders eliminate the leading block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub module_extension: ModuleExtension,
    pub position_preference: PositionPreference,
    pub elimination_block: usize,
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::new(OrderKind::GrevLex)
    }
}

impl MonomialOrder {
    pub fn new(kind: OrderKind) -> Self {
        MonomialOrder {
            kind,
            module_extension: ModuleExtension::TermOverPosition,
            position_preference: PositionPreference::Ascending,
            elimination_block: 0,
        }
    }

    pub fn lex() -> Self {
        Self::new(OrderKind::Lex)
    }

    pub fn grevlex() -> Self {
        Self::new(OrderKind::GrevLex)
    }

    pub fn graded_lex() -> Self {
        Self::new(OrderKind::GradedLex)
    }

    pub fn with_module_extension(mut self, ext: ModuleExtension) -> Self {
        self.module_extension = ext;
        self
    }

    pub fn with_position_preference(mut self, pref: PositionPreference) -> Self {
        self.position_preference = pref;
        self
    }

    pub fn with_elimination_block(mut self, block: usize) -> Self {
        self.elimination_block = block;
        self
    }

    /// Parses `lex`, `grevlex`, `glex`/`graded-lex`, optionally suffixed with `/pot` or `/top`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let text = text.trim();
        let (kind, ext) = match text.split_once('/') {
            Some((k, e)) => (k.trim(), Some(e.trim())),
            None => (text, None),
        };
        let kind = match kind {
            "lex" => OrderKind::Lex,
            "grevlex" | "degrevlex" => OrderKind::GrevLex,
            "glex" | "graded-lex" | "deglex" => OrderKind::GradedLex,
            other => return Err(format!("unknown monomial order `{other}`")),
        };
        let mut order = Self::new(kind);
        match ext {
            None | Some("top") => {}
            Some("pot") => order.module_extension = ModuleExtension::PositionOverTerm,
            Some(other) => return Err(format!("unknown module extension `{other}`")),
        }
        Ok(order)
    }

    pub fn name(&self) -> String {
        let kind = match self.kind {
            OrderKind::Lex => "lex",
            OrderKind::GrevLex => "grevlex",
            OrderKind::GradedLex => "graded-lex",
        };
        match self.module_extension {
            ModuleExtension::TermOverPosition => kind.to_string(),
            ModuleExtension::PositionOverTerm => format!("{kind}/pot"),
        }
    }

    /// Compares two monomials; errors if their lengths differ.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, PolyError> {
        if a.nvars() != b.nvars() {
            return Err(PolyError::LengthMismatch {
                left: a.nvars(),
                right: b.nvars(),
            });
        }
        Ok(self.cmp_exponents(a.exponents(), b.exponents()))
    }

    pub(crate) fn cmp_exponents(&self, a: &[u32], b: &[u32]) -> Ordering {
        let k = self.elimination_block.min(a.len());
        if k > 0 {
            let da: u64 = a[..k].iter().map(|&e| e as u64).sum();
            let db: u64 = b[..k].iter().map(|&e| e as u64).sum();
            let head = da.cmp(&db).then_with(|| a[..k].cmp(&b[..k]));
            if head != Ordering::Equal {
                return head;
            }
        }
        cmp_kind(self.kind, &a[k..], &b[k..])
    }

    pub(crate) fn cmp_positions(&self, a: usize, b: usize) -> Ordering {
        match self.position_preference {
            PositionPreference::Ascending => a.cmp(&b),
            PositionPreference::Descending => b.cmp(&a),
        }
    }

    /// Compares module terms `a.0 * e_{a.1}` and `b.0 * e_{b.1}`.
    pub(crate) fn cmp_module(&self, a: (&[u32], usize), b: (&[u32], usize)) -> Ordering {
        match self.module_extension {
            ModuleExtension::TermOverPosition => self
                .cmp_exponents(a.0, b.0)
                .then_with(|| self.cmp_positions(a.1, b.1)),
            ModuleExtension::PositionOverTerm => self
                .cmp_positions(a.1, b.1)
                .then_with(|| self.cmp_exponents(a.0, b.0)),
        }
    }
}

fn total(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

fn cmp_kind(kind: OrderKind, a: &[u32], b: &[u32]) -> Ordering {
    match kind {
        OrderKind::Lex => a.cmp(b),
        OrderKind::GradedLex => total(a).cmp(&total(b)).then_with(|| a.cmp(b)),
        OrderKind::GrevLex => total(a).cmp(&total(b)).then_with(|| {
            for (x, y) in a.iter().zip(b.iter()).rev() {
                if x != y {
                    // smaller exponent in the last differing variable wins
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_prefers_smaller_last_exponent() {
        let ord = MonomialOrder::grevlex();
        assert_eq!(
            ord.compare(&m(&[0, 2, 0]), &m(&[1, 0, 1])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn lex_first_variable_dominates() {
        let ord = MonomialOrder::lex();
        assert_eq!(ord.compare(&m(&[1, 0]), &m(&[0, 100])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn one_is_minimal_in_low_degree() {
        for ord in [MonomialOrder::lex(), MonomialOrder::grevlex(), MonomialOrder::graded_lex()] {
            let one = m(&[0, 0, 0]);
            for e in Monomial::enumerate_up_to(3, 3) {
                if e != one {
                    assert_eq!(ord.compare(&e, &one).unwrap(), Ordering::Greater);
                }
            }
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(MonomialOrder::lex().compare(&m(&[1]), &m(&[1, 0])).is_err());
    }

    #[test]
    fn elimination_block_dominates() {
        let ord = MonomialOrder::grevlex().with_elimination_block(1);
        // t * 1 > x^5
        assert_eq!(ord.compare(&m(&[1, 0]), &m(&[0, 5])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn parse_names() {
        assert_eq!(MonomialOrder::parse("lex").unwrap().kind, OrderKind::Lex);
        let pot = MonomialOrder::parse("grevlex/pot").unwrap();
        assert_eq!(pot.module_extension, ModuleExtension::PositionOverTerm);
        assert_eq!(MonomialOrder::parse(&pot.name()).unwrap(), pot);
        assert!(MonomialOrder::parse("weird").is_err());
    }
}
