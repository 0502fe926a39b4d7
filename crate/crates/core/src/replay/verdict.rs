use rayon::prelude::*;
use serde::Serialize;

use crate::board::Color;
use crate::sgf::{result_winner, SgfGame};

use super::{replay_with, AnalysisConfig, ReplayError, StrengthSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Agreement {
    Exact,
    Disagree,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameVerdict {
    /// Black when its final strength is higher; White otherwise, a tie
    /// going to White on komi.
    pub predicted: Color,
    pub s_black: f64,
    pub s_white: f64,
    pub official: Option<Color>,
    pub agreement: Agreement,
}

fn official_winner(result: Option<&str>) -> Option<Color> {
    let game = SgfGame { result: result.map(str::to_string), ..Default::default() };
    result_winner(&game)
}

pub fn predict_winner(series: &StrengthSeries) -> Result<GameVerdict, ReplayError> {
    let last = series.records.last().ok_or(ReplayError::EmptySeries)?;
    let predicted = if last.s_black > last.s_white { Color::Black } else { Color::White };
    let official = official_winner(series.meta.result.as_deref());
    let agreement = match official {
        None => Agreement::Unknown,
        Some(c) if c == predicted => Agreement::Exact,
        Some(_) => Agreement::Disagree,
    };
    Ok(GameVerdict { predicted, s_black: last.s_black, s_white: last.s_white, official, agreement })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchEntry {
    pub index: usize,
    pub verdict: Result<GameVerdict, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub entries: Vec<BatchEntry>,
    pub exact: usize,
    pub disagree: usize,
    pub unknown: usize,
    pub failed: usize,
    /// Exact agreements over games with a known result; `None` when there are none.
    pub agreement_rate: Option<f64>,
}

impl BatchSummary {
    pub fn from_entries(entries: Vec<BatchEntry>) -> Self {
        let (mut exact, mut disagree, mut unknown, mut failed) = (0, 0, 0, 0);
        for e in &entries {
            match &e.verdict {
                Ok(v) => match v.agreement {
                    Agreement::Exact => exact += 1,
                    Agreement::Disagree => disagree += 1,
                    Agreement::Unknown => unknown += 1,
                },
                Err(_) => failed += 1,
            }
        }
        let known = exact + disagree;
        let agreement_rate = (known > 0).then(|| exact as f64 / known as f64);
        Self { entries, exact, disagree, unknown, failed, agreement_rate }
    }
}

/// Games are evaluated concurrently; entries keep the input order.
pub fn batch_evaluate(games: &[SgfGame], config: &AnalysisConfig) -> BatchSummary {
    let entries = games
        .par_iter()
        .enumerate()
        .map(|(index, game)| {
            let verdict = replay_with(game, config)
                .and_then(|series| predict_winner(&series))
                .map_err(|e| e.to_string());
            BatchEntry { index, verdict }
        })
        .collect();
    BatchSummary::from_entries(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Move;
    use crate::energy::ParameterSet;
    use crate::replay::{GameMeta, MoveRecord};

    fn series(finals: &[(f64, f64)], result: Option<&str>) -> StrengthSeries {
        StrengthSeries {
            records: finals
                .iter()
                .enumerate()
                .map(|(i, &(b, w))| MoveRecord {
                    move_number: i as u32 + 1,
                    color: if i % 2 == 0 { Color::Black } else { Color::White },
                    point: None,
                    s_black: b,
                    s_white: w,
                    h: 0.0,
                    intent: Default::default(),
                })
                .collect(),
            params: ParameterSet::default(),
            meta: GameMeta { board_size: 19, komi: None, result: result.map(str::to_string), black: None, white: None },
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(predict_winner(&series(&[(667.0, 481.0)], None)).unwrap().predicted, Color::Black);
        assert_eq!(predict_winner(&series(&[(424.0, -51.0)], None)).unwrap().predicted, Color::Black);
        assert_eq!(predict_winner(&series(&[(5.0, 5.0)], None)).unwrap().predicted, Color::White);
        assert_eq!(predict_winner(&series(&[], None)), Err(ReplayError::EmptySeries));
    }

    #[test]
    fn agreement_against_result() {
        let v = predict_winner(&series(&[(1.0, 0.0)], Some("B+R"))).unwrap();
        assert_eq!((v.official, v.agreement), (Some(Color::Black), Agreement::Exact));
        let v = predict_winner(&series(&[(1.0, 0.0)], Some("W+0.5"))).unwrap();
        assert_eq!(v.agreement, Agreement::Disagree);
        let v = predict_winner(&series(&[(1.0, 0.0)], Some("Void"))).unwrap();
        assert_eq!(v.agreement, Agreement::Unknown);
    }

    #[test]
    fn only_the_final_record_counts() {
        let short = series(&[(0.0, 9.0), (3.0, 2.0)], Some("B+R"));
        let long = series(&[(50.0, 1.0), (0.0, 40.0), (3.0, 2.0)], Some("B+R"));
        assert_eq!(predict_winner(&short), predict_winner(&long));
    }

    #[test]
    fn batch_rates() {
        let config = AnalysisConfig::default();
        let opening = vec![Move::play(Color::Black, 3, 3)];
        let won = SgfGame { moves: opening.clone(), result: Some("B+R".into()), ..Default::default() };
        let s = batch_evaluate(std::slice::from_ref(&won), &config);
        assert_eq!((s.exact, s.agreement_rate), (1, Some(1.0)));

        let unknown = SgfGame { moves: opening, ..Default::default() };
        let s = batch_evaluate(&[won.clone(), unknown], &config);
        assert_eq!((s.exact, s.unknown, s.agreement_rate), (1, 1, Some(1.0)));

        let broken = SgfGame {
            moves: vec![Move::play(Color::Black, 3, 3), Move::play(Color::White, 3, 3)],
            result: Some("W+R".into()),
            ..Default::default()
        };
        let s = batch_evaluate(&[broken, won], &config);
        assert_eq!((s.failed, s.exact), (1, 1));
        assert!(s.entries[0].verdict.is_err());
        assert_eq!(s.entries[1].index, 1);
    }
}
