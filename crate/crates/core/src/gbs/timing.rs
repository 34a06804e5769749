use serde::{Deserialize, Serialize};

/// Chip parameters for the time of flight through the interferometer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalParams {
    pub refractive_index: f64,
    pub beamsplitter_length_m: f64,
    pub speed_of_light: f64,
}

impl Default for OpticalParams {
    fn default() -> Self {
        OpticalParams {
            refractive_index: 1.44,
            beamsplitter_length_m: 10e-6,
            speed_of_light: 3e8,
        }
    }
}

impl OpticalParams {
    /// Depth-`n` mesh: `n_index · n · L / c₀` seconds.
    pub fn latency(&self, n_modes: usize) -> f64 {
        self.refractive_index * n_modes as f64 * self.beamsplitter_length_m / self.speed_of_light
    }
}

pub fn optical_latency(n_modes: usize) -> f64 {
    OpticalParams::default().latency(n_modes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((optical_latency(12) - 5.76e-13).abs() < 1e-25);
        assert!((optical_latency(1) - 4.8e-14).abs() < 1e-26);
        assert!((optical_latency(8) - 8.0 * optical_latency(1)).abs() < 1e-25);
    }
}
