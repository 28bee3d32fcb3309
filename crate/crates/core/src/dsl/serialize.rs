use std::fmt::Write;

use crate::termgraph::{bfs_order, Node, TermGraph};

/// One equation per node, root first then breadth-first; the root is named
/// `name` and the others `name_1`, `name_2`, ...
pub fn serialize(g: &TermGraph, name: &str) -> String {
    let order = bfs_order(g);
    let mut names = vec![String::new(); g.len()];
    for (k, n) in order.iter().enumerate() {
        names[n.index()] = if k == 0 { name.to_string() } else { format!("{name}_{k}") };
    }
    let mut out = format!("{} {} {{\n", g.kind(), name);
    for n in order {
        match g.get(n) {
            Node::Leaf(f) => {
                let entries: Vec<String> = f.iter().map(|(a, v)| format!("{a}:{v}")).collect();
                writeln!(out, "  {} = leaf({});", names[n.index()], entries.join(", ")).unwrap();
            }
            Node::Inner { label, down, right } => {
                writeln!(
                    out,
                    "  {} = {} ? {} | {};",
                    names[n.index()],
                    label,
                    names[down.index()],
                    names[right.index()]
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::bisimilar_graphs;
    use crate::dsl::parse;
    use crate::lab::{escalation_witnesses, make_zero_one};

    #[test]
    fn zero_one_game_text() {
        let text = serialize(make_zero_one().graph(), "g");
        assert_eq!(
            text,
            "game g {\n  g = A ? g_1 | g_2;\n  g_1 = leaf(A:0, B:1);\n  g_2 = B ? g_3 | g;\n  g_3 = leaf(A:1, B:0);\n}\n"
        );
        let back = parse(&text).unwrap();
        assert!(bisimilar_graphs(&back[0].graph, make_zero_one().graph()).unwrap());
    }

    #[test]
    fn always_continue_has_two_right_heads() {
        let (_, _, s) = escalation_witnesses();
        let text = serialize(s.graph(), "s");
        assert_eq!(text.matches("-> r").count(), 2);
        assert_eq!(text.matches("->").count(), 2);
    }

    #[test]
    fn strategies_and_leaves() {
        let (st_a, _, _) = escalation_witnesses();
        let text = serialize(st_a.graph(), "st");
        assert!(text.starts_with("strategy st {\n  st = r ? "));
        let back = parse(&text).unwrap();
        assert!(bisimilar_graphs(&back[0].graph, st_a.graph()).unwrap());

        let leaf = parse("game t { t = leaf(A:-3/6, B:0); }").unwrap();
        assert_eq!(serialize(&leaf[0].graph, "t"), "game t {\n  t = leaf(A:-1/2, B:0);\n}\n");
    }
}
