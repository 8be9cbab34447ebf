pub mod bench;
pub mod certificates;
pub mod cycles;
pub mod decomp;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod iso;
pub mod oracles;
pub mod random;
pub mod tree_partition;
pub mod trees;
