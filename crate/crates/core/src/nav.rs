//! Unicycle navigation among circular and elliptical obstacles.
//!
//! The agent observes `[d_o, φ_o, d_g, φ_g, φ_obs]`: distance and egocentric
//! bearing to the centre of the nearest obstacle, distance and egocentric
//! bearing to the current goal, and the half-angle the obstacle subtends.
//! Entries 1, 3 and 4 are angles.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::gradient::{Environment, Transition};
use crate::kernel::wrap_angle;
use crate::rng::uniform_range;

/// Observation length.
pub const OBS_DIM: usize = 5;
/// Positions of the angular entries of the observation.
pub const ANGULAR_DIMS: [usize; 3] = [1, 3, 4];
/// Reported obstacle distance when a scenario has no obstacles.
pub const NO_OBSTACLE_DISTANCE: f64 = 100.0;
pub const COLLISION_REWARD: f64 = -100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, psi: f64) -> Self {
        Self { x, y, psi: wrap_angle(psi) }
    }
}

/// One Euler step of the unicycle with action `(ż, ψ̇)`; negative forward
/// speeds are treated as zero.
pub fn step(pose: Pose, action: &[f64], step_time: f64) -> Pose {
    let v = action[0].max(0.0);
    Pose {
        x: pose.x + step_time * v * libm::cos(pose.psi),
        y: pose.y + step_time * v * libm::sin(pose.psi),
        psi: wrap_angle(pose.psi + step_time * action[1]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Obstacle {
    Circle { center: [f64; 2], radius: f64 },
    Ellipse { center: [f64; 2], semi_axes: [f64; 2] },
}

impl Obstacle {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Obstacle::Circle { center, radius }
    }

    pub fn ellipse(center: [f64; 2], semi_axes: [f64; 2]) -> Self {
        Obstacle::Ellipse { center, semi_axes }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            Obstacle::Circle { center, radius } => *radius > 0.0 && radius.is_finite() && center.iter().all(|c| c.is_finite()),
            Obstacle::Ellipse { center, semi_axes } => {
                semi_axes.iter().all(|a| *a > 0.0 && a.is_finite()) && center.iter().all(|c| c.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument("obstacle sizes must be positive".into()))
        }
    }

    pub fn center(&self) -> [f64; 2] {
        match self {
            Obstacle::Circle { center, .. } | Obstacle::Ellipse { center, .. } => *center,
        }
    }

    /// Closed interior test.
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match self {
            Obstacle::Circle { center, radius } => {
                let (dx, dy) = (x - center[0], y - center[1]);
                dx * dx + dy * dy <= radius * radius
            }
            Obstacle::Ellipse { center, semi_axes } => {
                let u = (x - center[0]) / semi_axes[0];
                let v = (y - center[1]) / semi_axes[1];
                u * u + v * v <= 1.0
            }
        }
    }

    /// Euclidean distance to the boundary from outside, zero inside.
    pub fn boundary_distance(&self, x: f64, y: f64) -> f64 {
        if self.contains(x, y) {
            return 0.0;
        }
        match self {
            Obstacle::Circle { center, radius } => libm::hypot(x - center[0], y - center[1]) - radius,
            Obstacle::Ellipse { center, semi_axes } => {
                ellipse_distance(semi_axes, (x - center[0]).abs(), (y - center[1]).abs())
            }
        }
    }

    /// Half the angle the obstacle subtends from `(x, y)`; `π/2` inside.
    pub fn occlusion_angle(&self, x: f64, y: f64) -> f64 {
        if self.contains(x, y) {
            return PI / 2.0;
        }
        match self {
            Obstacle::Circle { center, radius } => {
                let d = libm::hypot(x - center[0], y - center[1]);
                libm::asin((radius / d).min(1.0))
            }
            Obstacle::Ellipse { center, semi_axes } => {
                // tangents from the point to the unit circle, mapped back
                let u = (x - center[0]) / semi_axes[0];
                let v = (y - center[1]) / semi_axes[1];
                let r = libm::hypot(u, v);
                let base = libm::atan2(v, u);
                let spread = libm::acos((1.0 / r).min(1.0));
                let tangent = |th: f64| {
                    [
                        center[0] + semi_axes[0] * libm::cos(th) - x,
                        center[1] + semi_axes[1] * libm::sin(th) - y,
                    ]
                };
                let a = tangent(base + spread);
                let b = tangent(base - spread);
                let cross = a[0] * b[1] - a[1] * b[0];
                let dot = a[0] * b[0] + a[1] * b[1];
                0.5 * libm::atan2(cross.abs(), dot)
            }
        }
    }
}

/// Distance from `(px, py)` (first quadrant, outside) to the ellipse with
/// semi-axes `a`, by bisection on the Lagrange parameter of the nearest point.
fn ellipse_distance(a: &[f64; 2], px: f64, py: f64) -> f64 {
    let f = |t: f64| {
        let u = a[0] * px / (t + a[0] * a[0]);
        let v = a[1] * py / (t + a[1] * a[1]);
        u * u + v * v - 1.0
    };
    let mut lo = 0.0;
    let mut hi = a[0].max(a[1]) * libm::hypot(px, py).max(1.0);
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let qx = a[0] * a[0] * px / (t + a[0] * a[0]);
    let qy = a[1] * a[1] * py / (t + a[1] * a[1]);
    libm::hypot(px - qx, py - qy)
}

pub fn collision(pose: &Pose, obstacle: &Obstacle) -> bool {
    obstacle.contains(pose.x, pose.y)
}

pub fn reward(collided: bool, d_g: f64) -> f64 {
    if collided {
        COLLISION_REWARD
    } else {
        10.0 - 10.0 * d_g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub d_o: f64,
    pub phi_o: f64,
    pub d_g: f64,
    pub phi_g: f64,
    pub phi_obs: f64,
}

impl Observation {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.d_o, self.phi_o, self.d_g, self.phi_g, self.phi_obs]
    }
}

/// Index of the obstacle with the smallest boundary distance.
pub fn nearest_obstacle(obstacles: &[Obstacle], x: f64, y: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, o) in obstacles.iter().enumerate() {
        let d = o.boundary_distance(x, y);
        if best.map_or(true, |(_, b)| d < b) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

pub fn observe(pose: &Pose, obstacles: &[Obstacle], goal: [f64; 2]) -> Observation {
    let (gx, gy) = (goal[0] - pose.x, goal[1] - pose.y);
    let d_g = libm::hypot(gx, gy);
    let phi_g = if d_g > 0.0 { wrap_angle(libm::atan2(gy, gx) - pose.psi) } else { 0.0 };
    let (d_o, phi_o, phi_obs) = match nearest_obstacle(obstacles, pose.x, pose.y) {
        None => (NO_OBSTACLE_DISTANCE, 0.0, 0.0),
        Some(i) => {
            let o = &obstacles[i];
            let c = o.center();
            let (ox, oy) = (c[0] - pose.x, c[1] - pose.y);
            let d = libm::hypot(ox, oy);
            let phi = if d > 0.0 { wrap_angle(libm::atan2(oy, ox) - pose.psi) } else { 0.0 };
            (d, phi, o.occlusion_angle(pose.x, pose.y))
        }
    };
    Observation { d_o, phi_o, d_g, phi_g, phi_obs }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StartSpec {
    /// Fixed position; heading defaults to facing the first goal.
    Fixed { x: f64, y: f64, psi: Option<f64> },
    /// Uniform position in a box (rejecting obstacle interiors) and uniform heading.
    Uniform { lo: [f64; 2], hi: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub obstacles: Vec<Obstacle>,
    pub goals: Vec<[f64; 2]>,
    pub start: StartSpec,
    pub step_time: f64,
    /// `[x_min, x_max, y_min, y_max]`; informational, poses are not clamped.
    pub bounds: [f64; 4],
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.goals.is_empty() {
            return Err(Error::InvalidArgument("scenario needs at least one goal".into()));
        }
        if !(self.step_time > 0.0) || !self.step_time.is_finite() {
            return Err(Error::InvalidArgument("step time must be positive".into()));
        }
        for o in &self.obstacles {
            o.validate()?;
        }
        if let StartSpec::Uniform { lo, hi } = self.start {
            if !(lo[0] < hi[0] && lo[1] < hi[1]) {
                return Err(Error::InvalidArgument("start box is empty".into()));
            }
        }
        Ok(())
    }

    pub fn inside_obstacle(&self, x: f64, y: f64) -> bool {
        self.obstacles.iter().any(|o| o.contains(x, y))
    }
}

/// Episode knobs not fixed by the dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeLimits {
    pub goal_radius: f64,
    pub max_speed: Option<f64>,
    pub max_turn_rate: Option<f64>,
}

impl Default for EpisodeLimits {
    fn default() -> Self {
        Self { goal_radius: 0.3, max_speed: None, max_turn_rate: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpisodeStatus {
    Running,
    Collided,
    /// Final goal captured; carries on with the capture reward.
    Finished,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NavEnv {
    scenario: Scenario,
    limits: EpisodeLimits,
    pose: Pose,
    goal: usize,
    status: EpisodeStatus,
    final_reward: f64,
}

impl NavEnv {
    pub fn new(scenario: Scenario, limits: EpisodeLimits) -> Result<Self> {
        scenario.validate()?;
        if !(limits.goal_radius >= 0.0) {
            return Err(Error::InvalidArgument("goal radius must be nonnegative".into()));
        }
        let pose = Pose::new(0.0, 0.0, 0.0);
        let mut env = Self { scenario, limits, pose, goal: 0, status: EpisodeStatus::Running, final_reward: 0.0 };
        if let StartSpec::Fixed { x, y, psi } = env.scenario.start {
            env.place(x, y, psi);
        }
        Ok(env)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn pose(&self) -> Pose {
        self.pose
    }

    pub fn status(&self) -> EpisodeStatus {
        self.status
    }

    pub fn goal_index(&self) -> usize {
        self.goal
    }

    pub fn current_goal(&self) -> [f64; 2] {
        self.scenario.goals[self.goal]
    }

    pub fn goal_distance(&self) -> f64 {
        let g = self.current_goal();
        libm::hypot(g[0] - self.pose.x, g[1] - self.pose.y)
    }

    /// Puts the agent at a pose and restarts the goal sequence.
    pub fn set_pose(&mut self, pose: Pose) {
        self.pose = pose;
        self.goal = 0;
        self.status = EpisodeStatus::Running;
        self.final_reward = 0.0;
    }

    fn place(&mut self, x: f64, y: f64, psi: Option<f64>) {
        let g = self.scenario.goals[0];
        let psi = psi.unwrap_or_else(|| libm::atan2(g[1] - y, g[0] - x));
        self.set_pose(Pose::new(x, y, psi));
    }

    pub fn observe(&self) -> Observation {
        observe(&self.pose, &self.scenario.obstacles, self.current_goal())
    }

    fn clamp_action(&self, action: &[f64]) -> [f64; 2] {
        let mut v = action[0].max(0.0);
        if let Some(m) = self.limits.max_speed {
            v = v.min(m);
        }
        let mut w = action[1];
        if let Some(m) = self.limits.max_turn_rate {
            w = w.clamp(-m, m);
        }
        [v, w]
    }
}

impl Environment for NavEnv {
    fn state_dim(&self) -> usize {
        OBS_DIM
    }

    fn action_dim(&self) -> usize {
        2
    }

    fn reset<R: RngCore + ?Sized>(&mut self, rng: &mut R) {
        match self.scenario.start {
            StartSpec::Fixed { x, y, psi } => self.place(x, y, psi),
            StartSpec::Uniform { lo, hi } => {
                let (mut x, mut y);
                let mut tries = 0;
                loop {
                    x = uniform_range(rng, lo[0], hi[0]);
                    y = uniform_range(rng, lo[1], hi[1]);
                    tries += 1;
                    if !self.scenario.inside_obstacle(x, y) || tries > 10_000 {
                        break;
                    }
                }
                let psi = uniform_range(rng, -PI, PI);
                self.set_pose(Pose::new(x, y, psi));
            }
        }
    }

    fn observation(&self) -> Vec<f64> {
        self.observe().to_vec()
    }

    fn step(&mut self, action: &[f64]) -> Transition {
        match self.status {
            EpisodeStatus::Collided => return Transition { reward: 0.0, absorbing: true },
            EpisodeStatus::Finished => return Transition { reward: self.final_reward, absorbing: true },
            EpisodeStatus::Running => {}
        }
        let started_inside = self.scenario.inside_obstacle(self.pose.x, self.pose.y);
        self.pose = step(self.pose, &self.clamp_action(action), self.scenario.step_time);
        if started_inside || self.scenario.inside_obstacle(self.pose.x, self.pose.y) {
            self.status = EpisodeStatus::Collided;
            return Transition { reward: COLLISION_REWARD, absorbing: true };
        }
        let d_g = self.goal_distance();
        let r = reward(false, d_g);
        if d_g <= self.limits.goal_radius {
            if self.goal + 1 < self.scenario.goals.len() {
                self.goal += 1;
            } else {
                self.status = EpisodeStatus::Finished;
                self.final_reward = r;
                return Transition { reward: r, absorbing: true };
            }
        }
        Transition { reward: r, absorbing: false }
    }

    fn is_absorbing(&self) -> bool {
        self.status != EpisodeStatus::Running
    }
}

const TRAINING_GOAL: [f64; 2] = [5.0, 6.0];
const EVAL_START: [f64; 2] = [0.5, 1.5];
/// Radius of the evaluation circle.
pub const EVAL_CIRCLE_RADIUS: f64 = 1.0;

fn training_task(name: &str, center: [f64; 2], radius: f64) -> Scenario {
    Scenario {
        name: name.to_string(),
        obstacles: vec![Obstacle::circle(center, radius)],
        goals: vec![TRAINING_GOAL],
        start: StartSpec::Uniform { lo: [0.0, 0.0], hi: [10.0, 10.0] },
        step_time: 0.5,
        bounds: [0.0, 10.0, 0.0, 10.0],
    }
}

fn eval_scenario(name: &str, obstacles: Vec<Obstacle>, goals: Vec<[f64; 2]>, bounds: [f64; 4]) -> Scenario {
    Scenario {
        name: name.to_string(),
        obstacles,
        goals,
        start: StartSpec::Fixed { x: EVAL_START[0], y: EVAL_START[1], psi: None },
        step_time: 0.5,
        bounds,
    }
}

/// The three single-obstacle training tasks.
pub fn make_training_tasks() -> Vec<Scenario> {
    vec![
        training_task("task1", [7.0, 2.0], 0.5),
        training_task("task2", [2.0, 2.0], 1.0),
        training_task("task3", [7.0, 7.0], 2.0),
    ]
}

/// Circle, ellipse and three-goal evaluation courses.
pub fn make_eval_scenarios() -> Vec<Scenario> {
    vec![
        eval_scenario(
            "eval-circle",
            vec![Obstacle::circle([2.5, 3.5], EVAL_CIRCLE_RADIUS)],
            vec![TRAINING_GOAL],
            [0.0, 10.0, 0.0, 10.0],
        ),
        eval_scenario(
            "eval-ellipse",
            vec![Obstacle::ellipse([2.5, 3.5], [0.5, 2.0])],
            vec![TRAINING_GOAL],
            [0.0, 10.0, 0.0, 10.0],
        ),
        eval_scenario(
            "eval-multi",
            vec![
                Obstacle::circle([2.5, 3.5], 0.6),
                Obstacle::circle([5.25, 3.75], 0.5),
                Obstacle::ellipse([8.25, 3.25], [0.5, 1.5]),
            ],
            vec![[5.0, 6.0], [5.5, 1.5], [11.0, 5.0]],
            [0.0, 12.0, 0.0, 12.0],
        ),
    ]
}

pub const PRESET_NAMES: [&str; 6] = ["task1", "task2", "task3", "eval-circle", "eval-ellipse", "eval-multi"];

pub fn scenario_by_name(name: &str) -> Option<Scenario> {
    make_training_tasks().into_iter().chain(make_eval_scenarios()).find(|s| s.name == name)
}
