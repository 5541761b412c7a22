//! Builds the meaning representation of one parsed sentence and prints its
//! elements, edges and the canonical JSON.
//!
//!     cargo run --example build_tmr [sentence.conllu]

use figdesc::corpus::parse_conllu;
use figdesc::ontology::OntologyGraph;
use figdesc::tmr::{Gazetteer, TmrContext};

const BAND_POSITION: &str = "\
# text = Figure 1 shows the band position.
1\tFigure\tfigure\tNOUN\t_\t_\t3\tnsubj\t_\t_
2\t1\t1\tNUM\t_\t_\t1\tnummod\t_\t_
3\tshows\tshow\tVERB\t_\t_\t0\troot\t_\t_
4\tthe\tthe\tDET\t_\t_\t6\tdet\t_\t_
5\tband\tband\tNOUN\t_\t_\t6\tcompound\t_\t_
6\tposition\tposition\tNOUN\t_\t_\t3\tobj\t_\t_
7\t.\t.\tPUNCT\t_\t_\t3\tpunct\t_\t_
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => BAND_POSITION.to_string(),
    };
    let graph = OntologyGraph::bundled();
    let gazetteer = Gazetteer::default();
    let ctx = TmrContext::new(&graph, None, &gazetteer);

    for (i, parsed) in parse_conllu(&text)?.iter().enumerate() {
        println!("{}", parsed.text());
        for frame in ctx.extract_frames(parsed) {
            let slot = |t: &Option<figdesc::tmr::FrameToken>| t.as_ref().map_or("-".to_string(), |t| t.form.clone());
            println!(
                "  frame: {} / {} / {}{}",
                slot(&frame.subject),
                frame.verb.form,
                slot(&frame.object),
                if frame.passive { " (passive)" } else { "" }
            );
        }
        let tmr = ctx.build_sentence_tmr(parsed, i);
        for e in &tmr.elements {
            println!("  {:?} {} d={} {:?}", e.kind, e.name, e.distance, e.source);
        }
        for (from, prop, to) in &tmr.edges {
            println!("  {from} --{prop}--> {to}");
        }
        println!("{}", serde_json::to_string_pretty(&tmr.canonical_json())?);
    }
    Ok(())
}
