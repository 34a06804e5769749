use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::clements::{compile_clements, MziSetting};
use super::encoding::{squeezing_params, EncodingParams};
use super::loss::LossBudget;
use super::takagi::{takagi, Complex64};
use crate::Result;

/// Everything needed to configure the device for one graph: input
/// squeezings, the interferometer and the expected transmissivity.
#[derive(Clone, Debug)]
pub struct GbsProgram {
    pub unitary: DMatrix<Complex64>,
    pub squeezings: Vec<f64>,
    pub eta_total: f64,
    pub mesh: Vec<MziSetting>,
    pub output_phases: Vec<f64>,
    pub depth: usize,
}

#[derive(Serialize, Deserialize)]
struct ProgramDump {
    unitary: Vec<Vec<[f64; 2]>>,
    squeezings: Vec<f64>,
    eta: f64,
    mesh: Vec<MziSetting>,
    output_phases: Vec<f64>,
    depth: usize,
}

impl GbsProgram {
    pub fn compile(a: &DMatrix<f64>, params: &EncodingParams, budget: &LossBudget) -> Result<Self> {
        budget.validate()?;
        let t = takagi(a)?;
        let squeezings = squeezing_params(&t.values, params.c)?;
        let mesh = compile_clements(&t.unitary)?;
        Ok(GbsProgram {
            eta_total: budget.total_transmissivity(a.nrows()),
            unitary: t.unitary,
            squeezings,
            mesh: mesh.mzis,
            output_phases: mesh.output_phases,
            depth: mesh.depth,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let dump = ProgramDump {
            unitary: self
                .unitary
                .row_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            squeezings: self.squeezings.clone(),
            eta: self.eta_total,
            mesh: self.mesh.clone(),
            output_phases: self.output_phases.clone(),
            depth: self.depth,
        };
        Ok(serde_json::to_string_pretty(&dump)?)
    }
}
