use std::collections::{BTreeSet, HashMap};

use num_rational::BigRational;

use crate::bisim::bisimilar_graphs;
use crate::game::{game_of, StratProf};
use crate::strategy::{st2g, Strat};
use crate::termgraph::{Agent, Choice, InnerLabel, Kind, Node, NodeRef, PayoffFn, StratHead, TermGraph};

use super::lexer::{tokenize, Pos, Tok, Token};
use super::{Block, DslError};

enum Term {
    Leaf(Vec<(String, BigRational, Pos)>, Pos),
    Inner { head: String, choice: Option<Choice>, pos: Pos, down: Arg, right: Arg },
}

enum Arg {
    Ref(String, Pos),
    Term(Box<Term>),
}

struct Equation {
    name: String,
    pos: Pos,
    term: Term,
}

struct BlockAst {
    kind: Kind,
    name: String,
    pos: Pos,
    of: Option<(String, Pos)>,
    equations: Vec<Equation>,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn unexpected(&self, wanted: &str) -> DslError {
        match self.peek() {
            Some(t) => DslError::at(self.pos(), format!("expected {wanted}, found {t}")),
            None => DslError::at(self.end, format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), DslError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok((s, pos))
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn rat(&mut self) -> Result<BigRational, DslError> {
        match self.peek() {
            Some(Tok::Rat(r)) => {
                let r = r.clone();
                self.at += 1;
                Ok(r)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn block(&mut self) -> Result<BlockAst, DslError> {
        let pos = self.pos();
        let kind = match self.peek() {
            Some(Tok::Ident(k)) if k == "game" => Kind::Game,
            Some(Tok::Ident(k)) if k == "profile" => Kind::Profile,
            Some(Tok::Ident(k)) if k == "strategy" => Kind::Strategy,
            _ => return Err(self.unexpected("`game`, `profile` or `strategy`")),
        };
        self.at += 1;
        let (name, _) = self.ident()?;
        let of = if self.peek() == Some(&Tok::Ident("of".into())) {
            self.at += 1;
            Some(self.ident()?)
        } else {
            None
        };
        self.expect(Tok::LBrace)?;
        let mut equations = Vec::new();
        loop {
            let (name, pos) = self.ident()?;
            self.expect(Tok::Eq)?;
            let term = self.term()?;
            self.expect(Tok::Semi)?;
            equations.push(Equation { name, pos, term });
            if self.peek() == Some(&Tok::RBrace) {
                self.at += 1;
                break;
            }
        }
        Ok(BlockAst { kind, name, pos, of, equations })
    }

    fn term(&mut self) -> Result<Term, DslError> {
        let pos = self.pos();
        if self.peek() == Some(&Tok::Ident("leaf".into())) && self.peek2() == Some(&Tok::LParen) {
            self.at += 2;
            let mut entries = Vec::new();
            loop {
                let (agent, apos) = self.ident()?;
                self.expect(Tok::Colon)?;
                entries.push((agent, self.rat()?, apos));
                if self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
            return Ok(Term::Leaf(entries, pos));
        }
        let (head, pos) = self.ident()?;
        let choice = if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let (c, cpos) = self.ident()?;
            let c = match c.as_str() {
                "d" => Choice::D,
                "r" => Choice::R,
                _ => return Err(DslError::at(cpos, format!("expected `d` or `r`, found `{c}`"))),
            };
            Some(c)
        } else {
            None
        };
        self.expect(Tok::Question)?;
        let down = self.arg()?;
        self.expect(Tok::Bar)?;
        let right = self.arg()?;
        Ok(Term::Inner { head, choice, pos, down, right })
    }

    fn arg(&mut self) -> Result<Arg, DslError> {
        let is_term = match (self.peek(), self.peek2()) {
            (Some(Tok::Ident(s)), Some(Tok::LParen)) if s == "leaf" => true,
            (Some(Tok::Ident(_)), Some(Tok::Question | Tok::Arrow)) => true,
            (Some(Tok::Ident(_)), _) => false,
            _ => return Err(self.unexpected("an identifier or a term")),
        };
        if is_term {
            Ok(Arg::Term(Box::new(self.term()?)))
        } else {
            let (name, pos) = self.ident()?;
            Ok(Arg::Ref(name, pos))
        }
    }
}

// Turns one block into a node table: equation `i` is node `i`, inline terms
// follow.
struct Builder<'a> {
    kind: Kind,
    names: HashMap<&'a str, usize>,
    nodes: Vec<Option<Node>>,
    agents: Option<BTreeSet<Agent>>,
}

fn agent(name: &str, pos: Pos) -> Result<Agent, DslError> {
    Agent::new(name).map_err(|e| DslError::at(pos, e.to_string()))
}

fn strategy_choice(head: &str) -> Option<Choice> {
    match head {
        "d" => Some(Choice::D),
        "r" => Some(Choice::R),
        _ => None,
    }
}

impl<'a> Builder<'a> {
    fn resolve(&mut self, arg: &'a Arg) -> Result<NodeRef, DslError> {
        match arg {
            Arg::Ref(name, pos) => self
                .names
                .get(name.as_str())
                .map(|i| NodeRef::from_index(*i))
                .ok_or_else(|| DslError::at(*pos, format!("unresolved identifier `{name}`"))),
            Arg::Term(t) => {
                self.nodes.push(None);
                let slot = self.nodes.len() - 1;
                self.fill(slot, t)?;
                Ok(NodeRef::from_index(slot))
            }
        }
    }

    fn fill(&mut self, slot: usize, term: &'a Term) -> Result<(), DslError> {
        let node = match term {
            Term::Leaf(entries, pos) => {
                let mut f = Vec::new();
                let mut seen = BTreeSet::new();
                for (name, v, apos) in entries {
                    let a = agent(name, *apos)?;
                    if !seen.insert(a.clone()) {
                        return Err(DslError::at(*apos, format!("agent `{name}` listed twice")));
                    }
                    f.push((a, v.clone()));
                }
                match &self.agents {
                    None => self.agents = Some(seen),
                    Some(expected) if *expected != seen => {
                        let names: Vec<_> = expected.iter().map(Agent::name).collect();
                        return Err(DslError::at(
                            *pos,
                            format!("leaf must give payoffs to exactly {}", names.join(", ")),
                        ));
                    }
                    Some(_) => {}
                }
                Node::Leaf(PayoffFn::new(f))
            }
            Term::Inner { head, choice, pos, down, right } => {
                let label = match (self.kind, choice) {
                    (Kind::Game, None) => InnerLabel::Game(agent(head, *pos)?),
                    (Kind::Profile, Some(c)) => InnerLabel::Profile(agent(head, *pos)?, *c),
                    (Kind::Strategy, None) => match strategy_choice(head) {
                        Some(c) => InnerLabel::Strategy(StratHead::Choice(c)),
                        None => InnerLabel::Strategy(StratHead::Agent(agent(head, *pos)?)),
                    },
                    (Kind::Profile, None) => {
                        return Err(DslError::at(*pos, "profile nodes need `agent -> d|r`"));
                    }
                    (kind, Some(_)) => {
                        return Err(DslError::at(*pos, format!("`->` is not allowed in a {kind} block")));
                    }
                };
                let down = self.resolve(down)?;
                let right = self.resolve(right)?;
                Node::inner(label, down, right)
            }
        };
        self.nodes[slot] = Some(node);
        Ok(())
    }
}

fn build(block: &BlockAst) -> Result<TermGraph, DslError> {
    let mut names = HashMap::new();
    for (i, eq) in block.equations.iter().enumerate() {
        if names.insert(eq.name.as_str(), i).is_some() {
            return Err(DslError::at(eq.pos, format!("duplicate equation `{}`", eq.name)));
        }
    }
    let mut b = Builder {
        kind: block.kind,
        names,
        nodes: block.equations.iter().map(|_| None).collect(),
        agents: None,
    };
    for (i, eq) in block.equations.iter().enumerate() {
        b.fill(i, &eq.term)?;
    }
    let nodes: Vec<Node> = b.nodes.into_iter().map(|n| n.expect("every slot filled")).collect();

    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![NodeRef(0)];
    while let Some(n) = stack.pop() {
        if !std::mem::replace(&mut seen[n.index()], true) {
            if let Some((d, r)) = nodes[n.index()].children() {
                stack.extend([d, r]);
            }
        }
    }
    if let Some(eq) = block.equations.iter().enumerate().find(|(i, _)| !seen[*i]).map(|(_, eq)| eq) {
        return Err(DslError::at(
            eq.pos,
            format!("equation `{}` is unreachable from `{}`", eq.name, block.equations[0].name),
        ));
    }
    TermGraph::new(block.kind, nodes, NodeRef(0)).map_err(|e| DslError::at(block.pos, format!("block `{}`: {e}", block.name)))
}

pub fn parse(text: &str) -> Result<Vec<Block>, DslError> {
    let toks = tokenize(text)?;
    let end = match text.lines().count() {
        0 => Pos { line: 1, column: 1 },
        n => Pos { line: n, column: text.lines().last().map_or(0, |l| l.chars().count()) + 1 },
    };
    let mut p = Parser { toks, at: 0, end };
    let mut asts = Vec::new();
    loop {
        asts.push(p.block()?);
        if p.peek().is_none() {
            break;
        }
    }
    let mut blocks: Vec<Block> = Vec::new();
    for ast in &asts {
        if blocks.iter().any(|b| b.name == ast.name) {
            return Err(DslError::at(ast.pos, format!("duplicate block `{}`", ast.name)));
        }
        blocks.push(Block {
            name: ast.name.clone(),
            kind: ast.kind,
            graph: build(ast)?,
            of: ast.of.as_ref().map(|(g, _)| g.clone()),
        });
    }
    for (ast, block) in asts.iter().zip(&blocks) {
        if let Some((game, pos)) = &ast.of {
            check_of(block, game, *pos, &blocks)?;
        }
    }
    Ok(blocks)
}

fn check_of(block: &Block, game: &str, pos: Pos, blocks: &[Block]) -> Result<(), DslError> {
    let target = blocks
        .iter()
        .find(|b| b.name == game)
        .ok_or_else(|| DslError::at(pos, format!("unresolved game `{game}`")))?;
    if target.kind != Kind::Game {
        return Err(DslError::at(pos, format!("`{game}` is a {}, not a game", target.kind)));
    }
    let same = |g: &TermGraph| bisimilar_graphs(g, &target.graph).expect("both games");
    let ok = match block.kind {
        Kind::Game => return Err(DslError::at(pos, "`of` is only allowed on profiles and strategies")),
        Kind::Profile => same(game_of(&StratProf::new(block.graph.clone()).expect("profile")).graph()),
        Kind::Strategy => {
            let st = Strat::new(block.graph.clone()).expect("strategy");
            target.graph.agents().iter().any(|p| same(st2g(&st, p).graph()))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(DslError::at(pos, format!("`{}` is not a {} of `{game}`", block.name, block.kind)))
    }
}
