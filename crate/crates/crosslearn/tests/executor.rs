use crosslearn::exec::ThreadedExecutor;
use crosslearn_core::nav::make_training_tasks;
use crosslearn_core::trainer::{nav_envs, Mode, SerialExecutor, Trainer, TrainerConfig};

#[test]
fn threaded_training_matches_serial() {
    for mode in [Mode::Agnostic, Mode::Cross] {
        let mut c = TrainerConfig::paper_vi(mode);
        c.seed = 4;
        c.max_speed = Some(1.0);
        c.max_turn_rate = Some(1.5);
        c.max_iters = 15;
        let tasks = make_training_tasks();
        let mut serial = Trainer::new(c.clone(), nav_envs(&c, &tasks).unwrap()).unwrap();
        let mut threaded = Trainer::new(c.clone(), nav_envs(&c, &tasks).unwrap()).unwrap();
        let exec = ThreadedExecutor::new(3);
        while !serial.finished() {
            serial.step(&SerialExecutor).unwrap();
            threaded.step(&exec).unwrap();
            assert_eq!(serial.bundle(), threaded.bundle());
        }
        assert_eq!(serial.history(), threaded.history());
    }
}
