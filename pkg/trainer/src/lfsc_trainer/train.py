"""Two-phase adversarial training at toy scale.

Phase 1 runs with quantization bypassed (identity pass-through), phase 2
flips the quantizer on with straight-through gradients; the weights carry
over verbatim. The generator minimizes 45x multi-resolution log-mel L1
plus the adversarial and feature-matching terms (1x and 2x).
"""

from __future__ import annotations

import argparse
import json
import math

import torch

from .config import GeneratorConfig, TrainConfig, toy_generator_config
from .data import Corpus
from .discriminators import DiscriminatorSet
from .errors import TrainingFailure
from .export import save_weights
from .generator import Generator
from .losses import MultiResolutionMelLoss, feature_matching_loss, gan_losses


def _set_lr(optimizer: torch.optim.Optimizer, lr: float) -> None:
    for group in optimizer.param_groups:
        group["lr"] = lr


def train_toy(
    corpus_dir,
    output_path,
    gen_cfg: GeneratorConfig | None = None,
    cfg: TrainConfig | None = None,
    log_path=None,
    disc_channels: int = 8,
) -> dict:
    """Run both phases on a WAV corpus and export a runtime weight file.

    Returns a summary with loss history and the frozen-extractor checksums.
    """
    gen_cfg = gen_cfg or toy_generator_config()
    cfg = cfg or TrainConfig()
    torch.manual_seed(cfg.seed)

    corpus = Corpus(
        corpus_dir,
        sample_rate=gen_cfg.sample_rate,
        excerpt_samples=cfg.excerpt_samples(gen_cfg.sample_rate),
        total_stride=gen_cfg.total_stride,
        seed=cfg.seed,
    )
    generator = Generator(gen_cfg)
    discriminators = DiscriminatorSet(gen_cfg.sample_rate, channels=disc_channels)
    mel_loss_fn = MultiResolutionMelLoss(gen_cfg.sample_rate)
    extractor_checksum_before = discriminators.slm.extractor_checksum()

    betas = (cfg.adam_beta1, cfg.adam_beta2)
    opt_g = torch.optim.Adam(generator.parameters(), lr=cfg.learning_rate, betas=betas)
    opt_d = torch.optim.Adam(
        list(discriminators.trainable_parameters()), lr=cfg.learning_rate, betas=betas
    )

    log_file = open(log_path, "w") if log_path else None
    mel_history: list[float] = []
    total_steps = cfg.phase1_steps + cfg.phase2_steps
    try:
        for step in range(total_steps):
            phase = 1 if step < cfg.phase1_steps else 2
            generator.set_quantizer_bypass(phase == 1)
            lr_now = cfg.lr_at(step)
            _set_lr(opt_g, lr_now)
            _set_lr(opt_d, lr_now)

            real = corpus.batch(cfg.batch_size)
            fake = generator(real)

            loss_d = real.new_zeros(())
            fake_detached = fake.detach()
            for (real_score, _), (fake_score, _) in zip(
                discriminators(real), discriminators(fake_detached)
            ):
                loss_d = loss_d + gan_losses(real_score, fake_score)[0]
            opt_d.zero_grad()
            loss_d.backward()
            opt_d.step()

            # feature-matching targets are constants for the generator step
            with torch.no_grad():
                real_outputs = discriminators(real)
            fake_outputs = discriminators(fake)
            loss_adv = real.new_zeros(())
            loss_fm = real.new_zeros(())
            for (real_score, real_feats), (fake_score, fake_feats) in zip(
                real_outputs, fake_outputs
            ):
                loss_adv = loss_adv + gan_losses(real_score, fake_score)[1]
                loss_fm = loss_fm + feature_matching_loss(real_feats, fake_feats)
            loss_mel = mel_loss_fn(real, fake)
            loss_g = (
                cfg.mel_weight * loss_mel
                + cfg.adv_weight * loss_adv
                + cfg.fm_weight * loss_fm
            )
            opt_g.zero_grad()
            loss_g.backward()
            opt_g.step()

            values = {
                "step": step,
                "phase": phase,
                "lr": lr_now,
                "loss_d": loss_d.item(),
                "loss_g": loss_g.item(),
                "loss_mel": loss_mel.item(),
                "loss_adv": loss_adv.item(),
                "loss_fm": loss_fm.item(),
            }
            if any(math.isnan(v) for k, v in values.items() if k.startswith("loss")):
                raise TrainingFailure(f"loss became NaN at step {step}", step=step)
            mel_history.append(values["loss_mel"])
            if log_file and (step % cfg.log_every == 0 or step == total_steps - 1):
                log_file.write(json.dumps(values) + "\n")
                log_file.flush()
    finally:
        if log_file:
            log_file.close()

    save_weights(generator, gen_cfg, output_path)
    return {
        "steps": total_steps,
        "mel_history": mel_history,
        "mel_at_step_10": mel_history[10] if len(mel_history) > 10 else None,
        "mel_final": sum(mel_history[-10:]) / min(10, len(mel_history)),
        "extractor_checksum_before": extractor_checksum_before,
        "extractor_checksum_after": discriminators.slm.extractor_checksum(),
        "output_path": str(output_path),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus", required=True, help="directory of mono 22.05 kHz WAV clips")
    parser.add_argument("--output", required=True, help="weight file to export (.lfsw)")
    parser.add_argument("--log", help="JSON-lines training log path")
    parser.add_argument("--phase1-steps", type=int, default=500)
    parser.add_argument("--phase2-steps", type=int, default=500)
    parser.add_argument("--batch-size", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--full-size", action="store_true", help="full channel widths (slow on CPU)")
    args = parser.parse_args(argv)

    gen_cfg = GeneratorConfig() if args.full_size else toy_generator_config()
    cfg = TrainConfig(
        phase1_steps=args.phase1_steps,
        phase2_steps=args.phase2_steps,
        batch_size=args.batch_size,
        seed=args.seed,
    )
    summary = train_toy(args.corpus, args.output, gen_cfg, cfg, log_path=args.log)
    print(
        f"done: {summary['steps']} steps, mel {summary['mel_history'][0]:.3f} -> "
        f"{summary['mel_final']:.3f}, weights at {summary['output_path']}"
    )
    return 0


def entry() -> None:
    raise SystemExit(main())
