use serde::Serialize;

use super::StrengthSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionEvent {
    pub move_number: u32,
    /// Change of `S_black - S_white` at this move.
    pub delta: f64,
    /// `|delta|` over the scale it was judged against.
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionConfig {
    pub window: usize,
    pub kappa: f64,
    /// Floor on the local scale, as a fraction of the whole series' median step.
    pub epsilon: f64,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self { window: 20, kappa: 6.0, epsilon: 1.0 }
    }
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Indices `m` of the gap series where `|g_m - g_{m-1}|` exceeds `kappa`
/// times the median absolute step over the previous `window` values.
///
/// The local scale is floored at `epsilon` times the median step of the
/// whole series, or its mean step when that median is zero, so that the
/// detector is unchanged by any transform `a g + b` with `a > 0`.
pub fn detect_gap_transitions(gaps: &[f64], config: &TransitionConfig) -> Vec<(usize, f64, f64)> {
    let window = config.window.max(2);
    let steps: Vec<f64> = gaps.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let global_median = median(&mut steps.clone());
    let floor = if global_median > 0.0 {
        config.epsilon * global_median
    } else {
        config.epsilon * steps.iter().sum::<f64>() / steps.len().max(1) as f64
    };
    let mut events = Vec::new();
    for m in window..gaps.len() {
        // Steps between the previous `window` values g_{m-window} .. g_{m-1}.
        let mut local = steps[m - window..m - 1].to_vec();
        let scale = median(&mut local).max(floor);
        if scale <= 0.0 {
            continue;
        }
        let delta = gaps[m] - gaps[m - 1];
        if delta.abs() > config.kappa * scale {
            events.push((m, delta, delta.abs() / scale));
        }
    }
    events
}

pub fn detect_transitions(series: &StrengthSeries, window: usize, kappa: f64) -> Vec<TransitionEvent> {
    let config = TransitionConfig { window, kappa, ..Default::default() };
    detect_gap_transitions(&series.gaps(), &config)
        .into_iter()
        .map(|(m, delta, score)| TransitionEvent { move_number: series.records[m].move_number, delta, score })
        .collect()
}
