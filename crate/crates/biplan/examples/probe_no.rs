use biplan::hardness::*;
use biplan::plan::makespan;
use biplan::scalar::Scalar;

fn main() {
    let x = PartitionInstance::new(vec![1, 2]).unwrap();
    let inst = build_hardness_workspace(&scale_instance(&x)).unwrap();
    println!("t_max = {}", inst.t_max);
    let spacing = Scalar::ratio(1, 4);
    let out = tiny_makespan_search(
        &inst.workspace, &inst.start, &inst.goal, &inst.t_max,
        &spacing, &spacing, 20_000_000,
    ).unwrap();
    match out {
        TinySearchOutcome::NotFoundAtResolution => println!("NOT FOUND"),
        TinySearchOutcome::Feasible(plan) => {
            println!("FOUND makespan {}", makespan(&plan));
            // Print the two trajectories sparsely: every 8th breakpoint.
            for (name, traj) in [("A", &plan.traj_a), ("B", &plan.traj_b)] {
                let pts: Vec<String> = traj.iter().step_by(4)
                    .map(|(t, p)| format!("{t}:({},{})", p.x, p.y)).collect();
                println!("{name}: {}", pts.join(" "));
            }
        }
    }
}
