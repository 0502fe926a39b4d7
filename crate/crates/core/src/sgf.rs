//! Reader and writer for the subset of SGF (FF[3]/FF[4]) needed to replay a
//! Go game: board size, komi, result, player names, setup stones and the main
//! line of moves.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{Action, Color, Move, Point, DEFAULT_BOARD_SIZE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgfErrorKind {
    UnbalancedParens,
    BadProperty,
    BadCoordinate,
    UnsupportedGame,
    /// No `(` opening a game tree was found.
    MissingGameTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind:?} at byte {offset}: {detail}")]
pub struct SgfError {
    pub offset: usize,
    pub kind: SgfErrorKind,
    pub detail: String,
}

impl SgfError {
    fn new(offset: usize, kind: SgfErrorKind, detail: impl Into<String>) -> Self {
        Self { offset, kind, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Players {
    pub black: Option<String>,
    pub white: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SgfGame {
    pub board_size: u8,
    pub komi: Option<f64>,
    pub result: Option<String>,
    pub players: Players,
    /// Black stones first, then white, each in file order.
    pub setup: Vec<(Color, Point)>,
    pub moves: Vec<Move>,
}

impl Default for SgfGame {
    fn default() -> Self {
        Self {
            board_size: DEFAULT_BOARD_SIZE,
            komi: None,
            result: None,
            players: Players::default(),
            setup: Vec::new(),
            moves: Vec::new(),
        }
    }
}

impl SgfGame {
    /// Winner declared in `RE`, if any.
    pub fn result_winner(&self) -> Option<Color> {
        result_winner(self)
    }

    pub fn color_swapped(&self) -> SgfGame {
        let mut g = self.clone();
        g.setup = self
            .setup
            .iter()
            .filter(|(c, _)| *c == Color::White)
            .chain(self.setup.iter().filter(|(c, _)| *c == Color::Black))
            .map(|&(c, p)| (c.opponent(), p))
            .collect();
        g.moves = self.moves.iter().map(|m| m.color_swapped()).collect();
        g.players = Players { black: self.players.white.clone(), white: self.players.black.clone() };
        g.result = self.result.as_ref().map(|r| {
            if let Some(rest) = r.strip_prefix("B+") {
                format!("W+{rest}")
            } else if let Some(rest) = r.strip_prefix("W+") {
                format!("B+{rest}")
            } else {
                r.clone()
            }
        });
        g
    }
}

pub fn result_winner(game: &SgfGame) -> Option<Color> {
    let re = game.result.as_deref()?.trim();
    if re.starts_with("B+") {
        Some(Color::Black)
    } else if re.starts_with("W+") {
        Some(Color::White)
    } else {
        None
    }
}

/// One raw node of the game tree: property identifiers with their value
/// lists and the byte offset of each value.
#[derive(Debug, Default)]
struct RawNode {
    props: Vec<RawProperty>,
}

#[derive(Debug)]
struct RawProperty {
    ident: String,
    offset: usize,
    values: Vec<(usize, String)>,
}

struct Lexer<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn unbalanced(&self) -> SgfError {
        SgfError::new(self.input.len(), SgfErrorKind::UnbalancedParens, "game tree is not closed")
    }

    /// Parses the game tree whose `(` is at the current position. Nodes on the
    /// main line (first child at every branch) go into `main`; other
    /// variations are checked for structure and dropped. Uses an explicit
    /// stack so deeply nested input cannot overflow the call stack.
    fn game_tree(&mut self, main: &mut Vec<RawNode>) -> Result<(), SgfError> {
        struct Frame {
            collecting: bool,
            nodes: usize,
            children: usize,
        }
        debug_assert_eq!(self.peek(), Some(b'('));
        self.pos += 1;
        let mut stack = vec![Frame { collecting: true, nodes: 0, children: 0 }];
        loop {
            self.skip_ws();
            let top = stack.last_mut().expect("stack is never empty inside the loop");
            match self.peek() {
                None => return Err(self.unbalanced()),
                Some(b';') => {
                    if top.children > 0 {
                        return Err(SgfError::new(self.pos, SgfErrorKind::UnbalancedParens, "node after a variation"));
                    }
                    self.pos += 1;
                    let node = self.node()?;
                    let top = stack.last_mut().expect("non-empty");
                    top.nodes += 1;
                    if top.collecting {
                        main.push(node);
                    }
                }
                Some(b'(') => {
                    if top.nodes == 0 {
                        return Err(SgfError::new(self.pos, SgfErrorKind::UnbalancedParens, "variation before any node"));
                    }
                    let collecting = top.collecting && top.children == 0;
                    top.children += 1;
                    self.pos += 1;
                    stack.push(Frame { collecting, nodes: 0, children: 0 });
                }
                Some(b')') => {
                    if top.nodes == 0 {
                        return Err(SgfError::new(self.pos, SgfErrorKind::UnbalancedParens, "empty game tree"));
                    }
                    self.pos += 1;
                    stack.pop();
                    if stack.is_empty() {
                        return Ok(());
                    }
                }
                Some(_) => {
                    return Err(SgfError::new(self.pos, SgfErrorKind::BadProperty, "expected ';', '(' or ')'"));
                }
            }
        }
    }

    fn node(&mut self) -> Result<RawNode, SgfError> {
        let mut node = RawNode::default();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    let mut ident = String::new();
                    while let Some(c) = self.peek() {
                        if !c.is_ascii_alphabetic() {
                            break;
                        }
                        // FF[3] allowed lowercase letters inside identifiers; only capitals are significant.
                        if c.is_ascii_uppercase() {
                            ident.push(c as char);
                        }
                        self.pos += 1;
                    }
                    if ident.is_empty() {
                        return Err(SgfError::new(start, SgfErrorKind::BadProperty, "property without capitals"));
                    }
                    let mut values = Vec::new();
                    loop {
                        self.skip_ws();
                        if self.peek() != Some(b'[') {
                            break;
                        }
                        let at = self.pos;
                        values.push((at, self.value()?));
                    }
                    if values.is_empty() {
                        return Err(SgfError::new(start, SgfErrorKind::BadProperty, format!("{ident} has no value")));
                    }
                    node.props.push(RawProperty { ident, offset: start, values });
                }
                _ => return Ok(node),
            }
        }
    }

    /// Reads `[...]` honouring `\` escapes. Soft line breaks (`\` + newline) vanish.
    fn value(&mut self) -> Result<String, SgfError> {
        self.pos += 1;
        let mut bytes = Vec::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(SgfError::new(self.input.len(), SgfErrorKind::UnbalancedParens, "unterminated value"));
            };
            self.pos += 1;
            match c {
                b']' => break,
                b'\\' => {
                    let Some(next) = self.peek() else {
                        return Err(SgfError::new(self.input.len(), SgfErrorKind::UnbalancedParens, "unterminated value"));
                    };
                    self.pos += 1;
                    match next {
                        b'\n' => {
                            if self.peek() == Some(b'\r') {
                                self.pos += 1;
                            }
                        }
                        b'\r' => {
                            if self.peek() == Some(b'\n') {
                                self.pos += 1;
                            }
                        }
                        other => bytes.push(other),
                    }
                }
                other => bytes.push(other),
            }
        }
        Ok(match String::from_utf8(bytes) {
            Ok(s) => s,
            Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
        })
    }
}

pub fn parse_sgf(input: &[u8]) -> Result<SgfGame, SgfError> {
    let mut lexer = Lexer { input, pos: 0 };
    let Some(open) = input.iter().position(|&b| b == b'(') else {
        return Err(SgfError::new(0, SgfErrorKind::MissingGameTree, "no game tree"));
    };
    lexer.pos = open;
    let mut nodes = Vec::new();
    lexer.game_tree(&mut nodes)?;
    interpret(&nodes)
}

fn interpret(nodes: &[RawNode]) -> Result<SgfGame, SgfError> {
    let mut game = SgfGame::default();

    // Board size first: coordinates depend on it.
    if let Some(root) = nodes.first() {
        for prop in &root.props {
            match prop.ident.as_str() {
                "GM" => {
                    let (at, v) = &prop.values[0];
                    if v.trim() != "1" {
                        return Err(SgfError::new(*at, SgfErrorKind::UnsupportedGame, format!("GM[{v}] is not Go")));
                    }
                }
                "SZ" => {
                    let (at, v) = &prop.values[0];
                    let v = v.trim();
                    let size = if let Some((a, b)) = v.split_once(':') {
                        if a.trim() != b.trim() {
                            return Err(SgfError::new(*at, SgfErrorKind::UnsupportedGame, "rectangular board"));
                        }
                        a.trim()
                    } else {
                        v
                    };
                    let n: u8 = size
                        .parse()
                        .map_err(|_| SgfError::new(*at, SgfErrorKind::BadProperty, format!("bad SZ[{v}]")))?;
                    if !(1..=26).contains(&n) {
                        return Err(SgfError::new(*at, SgfErrorKind::UnsupportedGame, format!("board size {n}")));
                    }
                    game.board_size = n;
                }
                _ => {}
            }
        }
    }

    let mut black_setup = Vec::new();
    let mut white_setup = Vec::new();
    for node in nodes {
        let mut node_move: Option<Move> = None;
        for prop in &node.props {
            let first = &prop.values[0];
            match prop.ident.as_str() {
                "B" | "W" => {
                    let color = if prop.ident == "B" { Color::Black } else { Color::White };
                    if node_move.is_some() || prop.values.len() != 1 {
                        return Err(SgfError::new(prop.offset, SgfErrorKind::BadProperty, "more than one move in a node"));
                    }
                    let action = match decode_move_point(&first.1, game.board_size) {
                        Ok(Some(p)) => Action::Play(p),
                        Ok(None) => Action::Pass,
                        Err(()) => {
                            return Err(SgfError::new(first.0, SgfErrorKind::BadCoordinate, format!("[{}]", first.1)))
                        }
                    };
                    node_move = Some(Move { color, action });
                }
                "AB" | "AW" => {
                    if !game.moves.is_empty() || node_move.is_some() {
                        return Err(SgfError::new(prop.offset, SgfErrorKind::BadProperty, "setup stones after moves"));
                    }
                    let (color, sink) = if prop.ident == "AB" {
                        (Color::Black, &mut black_setup)
                    } else {
                        (Color::White, &mut white_setup)
                    };
                    for (at, v) in &prop.values {
                        let points = decode_point_list(v, game.board_size)
                            .map_err(|_| SgfError::new(*at, SgfErrorKind::BadCoordinate, format!("[{v}]")))?;
                        sink.extend(points.into_iter().map(|p| (color, p)));
                    }
                }
                "KM" => {
                    let v = first.1.trim();
                    if !v.is_empty() {
                        let k: f64 = v
                            .parse()
                            .map_err(|_| SgfError::new(first.0, SgfErrorKind::BadProperty, format!("bad KM[{v}]")))?;
                        if !k.is_finite() {
                            return Err(SgfError::new(first.0, SgfErrorKind::BadProperty, "non-finite komi"));
                        }
                        game.komi = Some(k);
                    }
                }
                "RE" => game.result = Some(first.1.clone()),
                "PB" => game.players.black = Some(first.1.clone()),
                "PW" => game.players.white = Some(first.1.clone()),
                _ => {}
            }
        }
        if let Some(m) = node_move {
            game.moves.push(m);
        }
    }
    black_setup.extend(white_setup);
    game.setup = black_setup;
    Ok(game)
}

fn decode_coord(b: u8) -> Option<u8> {
    b.is_ascii_lowercase().then(|| b - b'a')
}

fn decode_point(v: &str, size: u8) -> Result<Point, ()> {
    let bytes = v.as_bytes();
    if bytes.len() != 2 {
        return Err(());
    }
    let col = decode_coord(bytes[0]).ok_or(())?;
    let row = decode_coord(bytes[1]).ok_or(())?;
    if col >= size || row >= size {
        return Err(());
    }
    Ok(Point::new(col, row))
}

/// `Ok(None)` is a pass: either `[]` or `[tt]` on boards up to 19x19.
fn decode_move_point(v: &str, size: u8) -> Result<Option<Point>, ()> {
    let v = v.trim();
    if v.is_empty() || (v == "tt" && size <= 19) {
        return Ok(None);
    }
    decode_point(v, size).map(Some)
}

/// A single point or an FF[4] compressed rectangle `aa:cc`.
fn decode_point_list(v: &str, size: u8) -> Result<Vec<Point>, ()> {
    let v = v.trim();
    match v.split_once(':') {
        None => decode_point(v, size).map(|p| vec![p]),
        Some((a, b)) => {
            let a = decode_point(a, size)?;
            let b = decode_point(b, size)?;
            let mut out = Vec::new();
            for col in a.col.min(b.col)..=a.col.max(b.col) {
                for row in a.row.min(b.row)..=a.row.max(b.row) {
                    out.push(Point::new(col, row));
                }
            }
            Ok(out)
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        if ch == ']' || ch == '\\' {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

struct Serialized<'a>(&'a SgfGame);

impl fmt::Display for Serialized<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.0;
        write!(f, "(;FF[4]GM[1]SZ[{}]", g.board_size)?;
        if let Some(k) = g.komi {
            write!(f, "KM[{k}]")?;
        }
        if let Some(r) = &g.result {
            write!(f, "RE[{}]", escape(r))?;
        }
        if let Some(p) = &g.players.black {
            write!(f, "PB[{}]", escape(p))?;
        }
        if let Some(p) = &g.players.white {
            write!(f, "PW[{}]", escape(p))?;
        }
        for (color, ident) in [(Color::Black, "AB"), (Color::White, "AW")] {
            let mut stones = g.setup.iter().filter(|(c, _)| *c == color).peekable();
            if stones.peek().is_some() {
                f.write_str(ident)?;
                for (_, p) in stones {
                    write!(f, "[{}]", p.to_sgf())?;
                }
            }
        }
        for m in &g.moves {
            let coord = match m.action {
                Action::Play(p) => p.to_sgf(),
                Action::Pass => String::new(),
            };
            write!(f, ";{}[{}]", m.color.letter(), coord)?;
        }
        f.write_str(")")
    }
}

pub fn serialize_sgf(game: &SgfGame) -> Vec<u8> {
    Serialized(game).to_string().into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_moves() {
        let g = parse_sgf(b"(;FF[4]GM[1]SZ[19];B[pd];W[dp])").unwrap();
        assert_eq!(g.board_size, 19);
        assert_eq!(g.moves, vec![Move::play(Color::Black, 15, 3), Move::play(Color::White, 3, 15)]);
    }

    #[test]
    fn passes() {
        let g = parse_sgf(b"(;SZ[19];B[];W[tt])").unwrap();
        assert_eq!(g.moves, vec![Move::pass(Color::Black), Move::pass(Color::White)]);
        // On a larger-than-19 board "tt" is a real point.
        let g = parse_sgf(b"(;SZ[21];B[tt])").unwrap();
        assert_eq!(g.moves, vec![Move::play(Color::Black, 19, 19)]);
    }

    #[test]
    fn unclosed_tree() {
        let err = parse_sgf(b"(;FF[4]").unwrap_err();
        assert_eq!(err.kind, SgfErrorKind::UnbalancedParens);
        assert!(err.offset <= 7);
        let err = parse_sgf(b"(;B[aa]").unwrap_err();
        assert_eq!(err.kind, SgfErrorKind::UnbalancedParens);
        let err = parse_sgf(b"(;C[never closed").unwrap_err();
        assert_eq!(err.kind, SgfErrorKind::UnbalancedParens);
    }

    #[test]
    fn not_go() {
        let err = parse_sgf(b"(;GM[2]SZ[8])").unwrap_err();
        assert_eq!(err.kind, SgfErrorKind::UnsupportedGame);
    }

    #[test]
    fn bad_coordinates() {
        assert_eq!(parse_sgf(b"(;SZ[9];B[jj])").unwrap_err().kind, SgfErrorKind::BadCoordinate);
        assert_eq!(parse_sgf(b"(;B[A1])").unwrap_err().kind, SgfErrorKind::BadCoordinate);
        assert_eq!(parse_sgf(b"(;B[abc])").unwrap_err().kind, SgfErrorKind::BadCoordinate);
    }

    #[test]
    fn bad_properties() {
        assert_eq!(parse_sgf(b"(;SZ[nineteen])").unwrap_err().kind, SgfErrorKind::BadProperty);
        assert_eq!(parse_sgf(b"(;KM[six])").unwrap_err().kind, SgfErrorKind::BadProperty);
        assert_eq!(parse_sgf(b"(;B[aa]W[bb])").unwrap_err().kind, SgfErrorKind::BadProperty);
        assert_eq!(parse_sgf(b"(;B)").unwrap_err().kind, SgfErrorKind::BadProperty);
        assert_eq!(parse_sgf(b"(;B[aa];AB[cc])").unwrap_err().kind, SgfErrorKind::BadProperty);
        assert_eq!(parse_sgf(b"hello").unwrap_err().kind, SgfErrorKind::MissingGameTree);
    }

    #[test]
    fn metadata_and_setup() {
        let g = parse_sgf(
            b"(;GM[1]FF[4]SZ[9]KM[6.5]RE[W+2.5]PB[Kitani]PW[Go Seigen]AW[ee]AB[cc][gg:gh]C[hi];B[dd])",
        )
        .unwrap();
        assert_eq!(g.board_size, 9);
        assert_eq!(g.komi, Some(6.5));
        assert_eq!(g.result.as_deref(), Some("W+2.5"));
        assert_eq!(g.players.black.as_deref(), Some("Kitani"));
        assert_eq!(g.players.white.as_deref(), Some("Go Seigen"));
        assert_eq!(
            g.setup,
            vec![
                (Color::Black, Point::new(2, 2)),
                (Color::Black, Point::new(6, 6)),
                (Color::Black, Point::new(6, 7)),
                (Color::White, Point::new(4, 4)),
            ]
        );
        assert_eq!(g.moves.len(), 1);
    }

    #[test]
    fn escaped_text() {
        let g = parse_sgf(br"(;PB[a\]b\\c]PW[line\
wrap])").unwrap();
        assert_eq!(g.players.black.as_deref(), Some(r"a]b\c"));
        assert_eq!(g.players.white.as_deref(), Some("linewrap"));
        let bytes = serialize_sgf(&g);
        assert_eq!(parse_sgf(&bytes).unwrap(), g);
    }

    #[test]
    fn unknown_properties_and_lowercase_idents() {
        let g = parse_sgf(b"(;FF[3]GaMe[1]XX[foo][bar]SZ[19];B[aa]TR[bb][cc]C[a (paren) ; here])").unwrap();
        assert_eq!(g.moves.len(), 1);
    }

    #[test]
    fn main_line_only() {
        let branched = parse_sgf(b"(;SZ[9];B[aa](;W[bb];B[cc](;W[dd])(;W[ee]))(;W[ff]))").unwrap();
        let pruned = parse_sgf(b"(;SZ[9];B[aa](;W[bb];B[cc](;W[dd])))").unwrap();
        assert_eq!(branched, pruned);
        assert_eq!(branched.moves.len(), 4);
        // Broken siblings still have to be well formed.
        assert!(parse_sgf(b"(;B[aa](;W[bb])(;W[cc])").is_err());
    }

    #[test]
    fn only_first_game_of_collection() {
        let g = parse_sgf(b"(;SZ[9];B[aa])(;SZ[13];B[bb];W[cc])").unwrap();
        assert_eq!(g.board_size, 9);
        assert_eq!(g.moves.len(), 1);
    }

    #[test]
    fn results() {
        let mut g = SgfGame::default();
        assert_eq!(result_winner(&g), None);
        g.result = Some("B+R".into());
        assert_eq!(result_winner(&g), Some(Color::Black));
        g.result = Some("W+2.5".into());
        assert_eq!(result_winner(&g), Some(Color::White));
        g.result = Some("0".into());
        assert_eq!(result_winner(&g), None);
        g.result = Some("Void".into());
        assert_eq!(result_winner(&g), None);
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize_sgf(&SgfGame::default()), b"(;FF[4]GM[1]SZ[19])".to_vec());
        let g = parse_sgf(b"(;FF[4]GM[1]SZ[19];B[pd];W[dp])").unwrap();
        assert_eq!(serialize_sgf(&g), b"(;FF[4]GM[1]SZ[19];B[pd];W[dp])".to_vec());
        assert_eq!(parse_sgf(&serialize_sgf(&g)).unwrap(), g);
        let g = SgfGame { result: Some("B+R".into()), ..SgfGame::default() };
        let out = String::from_utf8(serialize_sgf(&g)).unwrap();
        assert!(out.contains("RE[B+R]"));
    }

    #[test]
    fn passes_serialize_as_empty_value() {
        let g = SgfGame { moves: vec![Move::pass(Color::Black)], ..SgfGame::default() };
        assert_eq!(serialize_sgf(&g), b"(;FF[4]GM[1]SZ[19];B[])".to_vec());
    }
}
