//! Named mode labels of catalog fields, as maps into raw powers.

use crate::fieldcalc::Lattice;

/// `F(z) = Σ_n F_n z^{−p(n)−1}` with `2p = mult·(2n) + shift2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeIndexing {
    pub field: &'static str,
    pub lattice: Lattice,
    pub mult: i64,
    pub shift2: i64,
}

impl ModeIndexing {
    /// `χ(z) = Σ χ_n z^{−n−1/2}`: p = n − 1/2.
    pub const CHI: ModeIndexing = ModeIndexing { field: "chi", lattice: Lattice::HalfInteger, mult: 1, shift2: -1 };
    /// `Σ h_n z^{−2n−1}`, n ∈ Z+1/2: p = 2n.
    pub const H_CHI_TW: ModeIndexing =
        ModeIndexing { field: "h_chi_tw", lattice: Lattice::HalfInteger, mult: 2, shift2: 0 };
    /// `Σ h_n z^{−2n−2}`, n ∈ Z: p = 2n + 1.
    pub const H_CHI_UTW: ModeIndexing =
        ModeIndexing { field: "h_chi_utw", lattice: Lattice::Integer, mult: 2, shift2: 2 };
    /// `Σ h_n z^{−n−1/2}`, n ∈ Z+1/2: p = n − 1/2.
    pub const H_BG_TW: ModeIndexing =
        ModeIndexing { field: "h_bg_tw", lattice: Lattice::HalfInteger, mult: 1, shift2: -1 };
    /// `L(z) = Σ L_n z^{−n−2}`: p = n + 1.
    pub const VIRASORO: ModeIndexing = ModeIndexing { field: "L", lattice: Lattice::Integer, mult: 1, shift2: 2 };

    pub fn for_field(name: &str) -> Option<ModeIndexing> {
        [Self::CHI, Self::H_CHI_TW, Self::H_CHI_UTW, Self::H_BG_TW, Self::VIRASORO]
            .into_iter()
            .find(|m| m.field == name)
    }

    pub fn is_label(&self, label2: i64) -> bool {
        match self.lattice {
            Lattice::Integer => label2 % 2 == 0,
            Lattice::HalfInteger => label2 % 2 != 0,
        }
    }

    /// Raw power of the mode `label2 / 2`.
    pub fn power(&self, label2: i64) -> Option<i64> {
        if !self.is_label(label2) {
            return None;
        }
        let p2 = self.mult * label2 + self.shift2;
        (p2 % 2 == 0).then_some(p2 / 2)
    }

    /// Labels (doubled) with |n| ≤ max_label2 / 2, ascending.
    pub fn labels(&self, max_label2: i64) -> impl Iterator<Item = i64> + '_ {
        (-max_label2..=max_label2).filter(|l| self.is_label(*l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stated_indexings() {
        assert_eq!(ModeIndexing::H_CHI_TW.power(1), Some(1));
        assert_eq!(ModeIndexing::H_CHI_TW.power(-3), Some(-3));
        assert_eq!(ModeIndexing::H_CHI_UTW.power(2), Some(3));
        assert_eq!(ModeIndexing::H_BG_TW.power(1), Some(0));
        assert_eq!(ModeIndexing::VIRASORO.power(-4), Some(-1));
        assert_eq!(ModeIndexing::CHI.power(7), Some(3));
        assert_eq!(ModeIndexing::CHI.power(2), None);
    }

    #[test]
    fn indexings_are_injective() {
        for idx in [ModeIndexing::H_CHI_TW, ModeIndexing::H_CHI_UTW, ModeIndexing::H_BG_TW, ModeIndexing::VIRASORO] {
            let powers: Vec<i64> = idx.labels(12).map(|l| idx.power(l).unwrap()).collect();
            let mut sorted = powers.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), powers.len(), "{}", idx.field);
        }
    }
}
