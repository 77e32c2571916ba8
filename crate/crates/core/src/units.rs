//! Physical constants in the (eV, Å, s) system.

/// Constants for an electron. Lengths in Å, energies in eV, times in s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub hbar_ev_s: f64,
    pub hbarc_ev_a: f64,
    pub electron_rest_ev: f64,
    pub c_a_per_s: f64,
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::ELECTRON
    }
}

impl UnitSystem {
    pub const ELECTRON: UnitSystem = UnitSystem {
        hbar_ev_s: 6.582119569e-16,
        hbarc_ev_a: 1973.269804,
        electron_rest_ev: 510998.95,
        c_a_per_s: 2.99792458e18,
    };

    /// ħ²/2m in eV·Å².
    pub fn hbar2_2m(&self) -> f64 {
        self.hbarc_ev_a * self.hbarc_ev_a / (2.0 * self.electron_rest_ev)
    }

    /// ħ/m in Å²/s.
    pub fn hbar_over_m(&self) -> f64 {
        2.0 * self.hbar2_2m() / self.hbar_ev_s
    }

    pub fn k_of_e(&self, e: f64) -> f64 {
        (2.0 * self.electron_rest_ev * e).sqrt() / self.hbarc_ev_a
    }

    pub fn e_of_k(&self, k: f64) -> f64 {
        self.hbar2_2m() * k * k
    }

    /// Group velocity ħk/m in Å/s.
    pub fn velocity(&self, k: f64) -> f64 {
        self.hbar_over_m() * k
    }

    /// Angular frequency E/ħ in rad/s.
    pub fn omega(&self, k: f64) -> f64 {
        0.5 * self.hbar_over_m() * k * k
    }

    /// Signed squared local wavenumber 2m(V-E)/ħ² in Å⁻².
    pub fn s_of(&self, v: f64, k: f64) -> f64 {
        v / self.hbar2_2m() - k * k
    }

    pub fn is_valid(&self) -> bool {
        [self.hbar_ev_s, self.hbarc_ev_a, self.electron_rest_ev, self.c_a_per_s]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_ev_wavenumber() {
        let u = UnitSystem::ELECTRON;
        let k = u.k_of_e(5.0);
        assert!((k - 1.145575016677752).abs() < 1e-12);
        assert!((k / 5f64.sqrt() - 0.51232).abs() < 1e-4);
        assert!((u.e_of_k(k) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn hbar_over_m_consistent() {
        let u = UnitSystem::ELECTRON;
        let alt = u.hbarc_ev_a * u.c_a_per_s / u.electron_rest_ev;
        assert!((u.hbar_over_m() / alt - 1.0).abs() < 1e-8);
    }
}
