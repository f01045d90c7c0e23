//! Reference implementations of classic algorithms and puzzles.

mod banker;
mod coin;
mod geometry;
mod graph;
mod puzzles;

pub use banker::{BankerError, BankerState, BankerVerdict, Request};
pub use coin::{fair_bit, fair_roulette, rotation_index, smallest_prime_at_least, BiasedCoin, CoinError, Draw, Toss};
pub use geometry::{
    angle_excess, cross, parse_points, pythagoras_signs, sylvester_line, GeometryError, Point, SylvesterLine, Triangle,
    ANGLE_TOLERANCE,
};
pub use graph::{shortest_paths, shortest_paths_from, Edge, Graph, GraphError, ShortestPaths};
pub use puzzles::{
    is_knight_move, knight_tour, replay, river_crossing, validate_tour, Bank, BoardSizeError, Item, KnightTour,
};
