//! Descent smoke check: on the easy two-blob dataset the training loss
//! should fall (or hold) across each of the first ten epochs. This guards
//! the optimizer wiring, not a convergence guarantee.

use unig_core::toy::{separable_blobs, BlobSpec};
use unig_core::{
    build_projection, make_splits, train_single, Placement, ProjectionConfig, SplitProtocol,
    SplitSpec, TrainConfig,
};

#[test]
fn training_loss_never_rises_over_the_first_ten_epochs_on_the_toy_blobs() {
    let dataset = separable_blobs(&BlobSpec::default());
    let spec = SplitSpec::new(SplitProtocol::PerClass, (0.48, 0.32, 0.20), 1, 11);
    let split = &make_splits(&dataset, &spec).unwrap()[0];
    let projection = build_projection(dataset.structure(), &ProjectionConfig::default()).unwrap();

    let cfg = TrainConfig {
        learning_rate: 0.01,
        weight_decay: 0.0,
        epochs: 12,
        seed: 3,
    };
    let outcome = train_single(
        dataset.features(),
        dataset.labels(),
        split,
        Some(&projection),
        Placement::Pair {
            forward: 0,
            reverse: 2,
        },
        &[16],
        0.0,
        &cfg,
    )
    .unwrap();

    for (epoch, pair) in outcome.train_losses[..11].windows(2).enumerate() {
        assert!(
            pair[1] <= pair[0],
            "loss rose from {} to {} at epoch {}",
            pair[0],
            pair[1],
            epoch + 1
        );
    }
}
