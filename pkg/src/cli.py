"""
Interface de linha de comando (CLI) do Skeleton VCL.
Usa Typer para uma experiência moderna e rica.

Códigos de saída: 0 sucesso, 1 falha em tempo de execução, 2 erro de
uso ou de configuração.
"""

from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from config.logging_config import setup_logging
from config.run_config import load_run_config, parse_config_text
from config.settings import get_settings
from src.core.constants import DEFAULT_FRAMES, DEFAULT_TOPOLOGY
from src.core.exceptions import ConfigError, ContractError, VCLError
from src.core.models import MetricsRecord, RunConfig
from src.core.types import Protocol
from src.data.skeleton import Dataset, SkeletonSequence, load_topology
from src.data.synth import synth_generate
from src.data.transforms import derive_stream, prepare_dataset
from src.runner import ExperimentRunner, RunSummary
from src.storage import (
    CheckpointBundle,
    TextStore,
    export_manifest,
    load_checkpoint,
    load_dataset,
    save_dataset,
)
from src.training.ablation import ablation_summary, run_ablation
from src.training.checkpoint import bundle_frames, bundle_stream
from src.training.embeddings import embedding_dump
from src.training.saliency import joint_saliency

EXIT_RUNTIME = 1
EXIT_USAGE = 2

# Inicializa CLI
app = typer.Typer(
    name="skeleton-vcl",
    help="Aprendizado contrastivo variacional auto-supervisionado para sequências de esqueleto.",
    add_completion=False,
)

# Console Rico para output formatado
console = Console()
err_console = Console(stderr=True)


@app.callback()
def configure() -> None:
    """Configura o logging a partir do ambiente (VCL_LOG_*)."""
    settings = get_settings()
    setup_logging(
        level=settings.log_level,
        log_path=settings.log_path,
        json_format=settings.log_json,
    )


@contextmanager
def handle_errors(usage_errors: tuple[type[VCLError], ...] = ()) -> Iterator[None]:
    """Converte exceções do sistema em códigos de saída estáveis."""
    try:
        yield
    except (ConfigError, *usage_errors) as e:
        _print_error(e)
        raise typer.Exit(code=EXIT_USAGE) from e
    except VCLError as e:
        _print_error(e)
        raise typer.Exit(code=EXIT_RUNTIME) from e


def _load_config(
    config_path: Optional[Path],
    assignments: list[str],
    shortcuts: Optional[dict[str, Optional[str]]] = None,
    require_checkpoint: bool = True,
) -> RunConfig:
    """Arquivo, `--set key=value` e flags curtas (nesta ordem de precedência)."""
    overrides = parse_config_text("\n".join(assignments))
    overrides.update({key: value for key, value in (shortcuts or {}).items() if value is not None})
    defaults = {"workers": str(get_settings().workers)}
    return load_run_config(config_path, overrides, require_checkpoint, defaults)


def _prepared_sample_set(bundle: CheckpointBundle, dataset: Dataset) -> Dataset:
    """Mesmo pré-processamento e modalidade do treino do checkpoint."""
    return derive_stream(prepare_dataset(dataset, bundle_frames(bundle)), bundle_stream(bundle))


# COMANDOS

@app.command("gen-data")
def gen_data(
    output: Path = typer.Option(Path("data/synth.skl"), "--output", "-o", help="Arquivo SKL1"),
    classes: int = typer.Option(8, "--classes", min=2, help="Número de classes"),
    per_class: int = typer.Option(40, "--per-class", min=1, help="Amostras por classe"),
    frames: int = typer.Option(DEFAULT_FRAMES, "--frames", min=2, help="Quadros por sequência"),
    topology: str = typer.Option(DEFAULT_TOPOLOGY, "--topology", help="default17 ou ntu25"),
    jitter: float = typer.Option(0.02, "--jitter", min=0.0, help="Desvio do ruído por coordenada"),
    seed: int = typer.Option(0, "--seed", min=0, help="Semente"),
    manifest: Optional[Path] = typer.Option(None, "--manifest", help="Manifesto de topologia"),
):
    """
    Gera um dataset sintético determinístico.

    Exemplos:
        skeleton-vcl gen-data --classes 8 --per-class 50 --seed 7
        skeleton-vcl gen-data --topology ntu25 -o data/ntu_like.skl
    """
    with handle_errors(usage_errors=(ContractError,)):
        dataset = synth_generate(
            n_classes=classes,
            per_class=per_class,
            topology=load_topology(topology),
            frames=frames,
            seed=seed,
            jitter=jitter,
        )
        path = save_dataset(dataset, output)
        if manifest is not None:
            export_manifest(dataset, manifest)

    table = Table(title="Amostras por Classe")
    table.add_column("Classe", style="cyan")
    table.add_column("Nome", style="green")
    table.add_column("Amostras", justify="right", style="yellow")
    for index, count in enumerate(dataset.class_histogram()):
        table.add_row(str(index), dataset.class_names[index], str(int(count)))
    console.print(table)
    console.print(f"[green]✓ {len(dataset)} amostras gravadas em: {path}[/green]")


@app.command("run")
def run(
    config: Optional[Path] = typer.Argument(None, help="Arquivo de configuração (key = value)"),
    assignments: list[str] = typer.Option([], "--set", "-s", help="key=value (repetível)"),
    protocol: Optional[str] = typer.Option(None, "--protocol", "-p", help="Protocolo"),
    stream: Optional[str] = typer.Option(None, "--stream", help="joint, bone, motion ou all"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Semente da execução"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Diretório de saída"),
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", "-c", help="Checkpoint"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0, help="Épocas"),
):
    """
    Executa um protocolo (pré-treino ou downstream).

    Exemplos:
        skeleton-vcl run experimento.cfg
        skeleton-vcl run --protocol pretrain --epochs 2 -o runs/smoke
        skeleton-vcl run --protocol linear -c runs/smoke -o runs/smoke
        skeleton-vcl run experimento.cfg --set contrastive.temperature=0.1 --stream all
    """
    shortcuts = {
        "protocol": protocol,
        "stream": stream,
        "seed": None if seed is None else str(seed),
        "output_dir": None if output is None else str(output),
        "eval.checkpoint": None if checkpoint is None else str(checkpoint),
    }
    with handle_errors():
        resolved = _load_config(config, assignments, shortcuts)
        if epochs is not None:
            key = "train.epochs" if resolved.protocol is Protocol.PRETRAIN else "eval.epochs"
            resolved = _load_config(config, assignments, {**shortcuts, key: str(epochs)})

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
        ) as progress:
            label = f"{resolved.protocol.value} ({resolved.stream.value})"
            progress.add_task(f"Executando {label}...", total=None)
            summary = ExperimentRunner(resolved).run()

    _display_summary(summary)


@app.command("saliency")
def saliency(
    checkpoint: Path = typer.Argument(..., exists=True, dir_okay=False, help="Checkpoint"),
    data: Path = typer.Argument(..., exists=True, dir_okay=False, help="Dataset SKL1"),
    index: int = typer.Option(0, "--index", "-i", help="Índice da amostra"),
    target: Optional[int] = typer.Option(None, "--target", "-t", help="Classe alvo"),
    output: Path = typer.Option(Path("saliency.csv"), "--output", "-o", help="CSV T×N"),
):
    """
    Grava o mapa de importância junta × frame de uma amostra.

    Exemplos:
        skeleton-vcl saliency runs/smoke/linear.vclc data/synth.skl --index 3
    """
    with handle_errors(usage_errors=(ContractError,)):
        bundle = load_checkpoint(checkpoint)
        dataset = load_dataset(data)
        if not 0 <= index < len(dataset):
            raise typer.BadParameter(
                f"índice {index} fora de [0, {len(dataset)})", param_hint="--index"
            )
        sample: SkeletonSequence = _prepared_sample_set(bundle, dataset.subset([index]))[0]
        importance = joint_saliency(bundle, sample, sample.label if target is None else target)
        path = TextStore().write_matrix(output, importance)

    console.print(
        f"[green]✓ Mapa {importance.shape[0]}×{importance.shape[1]} gravado em: {path}[/green] "
        f"(máximo na junta {int(importance.sum(axis=0).argmax())})"
    )


@app.command("dump-embeddings")
def dump_embeddings(
    checkpoint: Path = typer.Argument(..., exists=True, dir_okay=False, help="Checkpoint (.vclc)"),
    data: Path = typer.Argument(..., exists=True, dir_okay=False, help="Dataset SKL1"),
    output: Path = typer.Option(Path("embeddings.csv"), "--output", "-o", help="Arquivo de saída"),
):
    """
    Exporta μ de cada amostra para projeção externa.

    Exemplos:
        skeleton-vcl dump-embeddings runs/smoke/pretrain.vclc data/synth.skl -o mu.csv
    """
    with handle_errors():
        bundle = load_checkpoint(checkpoint)
        dataset = _prepared_sample_set(bundle, load_dataset(data))
        path = embedding_dump(bundle, dataset, output)

    console.print(f"[green]✓ {len(dataset)} embeddings gravados em: {path}[/green]")


@app.command("fuse")
def fuse(
    config: Optional[Path] = typer.Argument(None, help="Config downstream (stream = all)"),
    assignments: list[str] = typer.Option([], "--set", "-s", help="key=value (repetível)"),
    weights: Optional[str] = typer.Option(None, "--weights", "-w", help="Pesos joint,bone,motion"),
):
    """
    Refaz a fusão das três modalidades a partir dos checkpoints gravados.

    Exemplos:
        skeleton-vcl fuse runs/all/resolved.cfg --weights 0.6,0.6,0.4
    """
    with handle_errors(usage_errors=(ContractError,)):
        shortcuts = {"fusion.weights": weights}
        resolved = _load_config(config, assignments, shortcuts, require_checkpoint=False)
        summary = ExperimentRunner(resolved).fuse(resolved.fusion.weights)

    _display_summary(summary)


@app.command("ablation")
def ablation(
    config: Optional[Path] = typer.Argument(None, help="Configuração base"),
    assignments: list[str] = typer.Option([], "--set", "-s", help="key=value (repetível)"),
    seeds: str = typer.Option("0,1,2,3,4", "--seeds", help="Seeds pareadas"),
    fraction: Optional[float] = typer.Option(None, "--fraction", "-f", help="Fração rotulada"),
    output: Path = typer.Option(Path("ablation.csv"), "--output", "-o", help="Tabela CSV de saída"),
):
    """
    Compara VCL e a variante determinística no semi-supervisionado.

    Exemplos:
        skeleton-vcl ablation --fraction 0.01 --set data.per_class=80
    """
    try:
        seed_list = [int(s) for s in seeds.split(",") if s.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"seeds inválidas: {seeds}", param_hint="--seeds") from e

    with handle_errors(usage_errors=(ContractError,)):
        resolved = _load_config(config, assignments, require_checkpoint=False)
        chosen = fraction if fraction is not None else resolved.eval.fraction
        frame = run_ablation(resolved, seed_list, chosen)
        path = TextStore().write_table(output, frame)

    summary = ablation_summary(frame)
    table = Table(title=f"VCL × Determinístico (fração {chosen})")
    table.add_column("Seed", style="cyan", justify="right")
    table.add_column("VCL", style="green", justify="right")
    table.add_column("Determinístico", style="yellow", justify="right")
    table.add_column("Δ", justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(
            str(row.seed), f"{row.vcl_top1:.3f}", f"{row.baseline_top1:.3f}", f"{row.delta:+.3f}"
        )
    table.add_row(
        "média",
        f"{summary['vcl_mean']:.3f}",
        f"{summary['baseline_mean']:.3f}",
        f"{summary['delta_mean']:+.3f}",
    )
    console.print(table)

    verdict = "[green]não inferior[/green]" if summary["non_inferior"] else "[red]inferior[/red]"
    console.print(f"VCL {verdict} ao baseline (margem 2 p.p.); tabela em: {path}")


@app.command("version")
def version():
    """
    Exibe a versão do sistema.
    """
    from src import __version__

    console.print(f"[bold blue]Skeleton VCL[/bold blue] v{__version__}")
    console.print("Aprendizado contrastivo variacional para sequências de esqueleto")


# FUNÇÕES DE DISPLAY

def _print_error(error: VCLError) -> None:
    """Exibe o erro com contexto estruturado no stderr."""
    info = error.to_dict()
    lines = [f"[bold]{info['message']}[/bold]"]
    lines.extend(f"{key}: {value}" for key, value in info["details"].items())
    if info["cause"]:
        lines.append(f"[dim]causa: {info['cause']}[/dim]")
    err_console.print(Panel("\n".join(lines), title=info["error_type"], border_style="red"))


def _format_optional(value: Optional[float], pattern: str = "{:.4f}") -> str:
    return "-" if value is None else pattern.format(value)


def _display_summary(summary: RunSummary) -> None:
    """Exibe os registros de métricas e os artefatos gravados."""
    records: list[MetricsRecord] = summary.records
    if records:
        table = Table(title=f"Métricas ({summary.protocol.value})")
        table.add_column("Época", justify="right", style="dim")
        table.add_column("Split", style="cyan")
        table.add_column("Perda", justify="right", style="yellow")
        table.add_column("InfoNCE", justify="right")
        table.add_column("KL q/k", justify="right")
        table.add_column("CE", justify="right")
        table.add_column("Top-1", justify="right", style="green")
        for record in records:
            kl = (
                "-"
                if record.loss_kl_q is None
                else f"{record.loss_kl_q:.3f}/{_format_optional(record.loss_kl_k, '{:.3f}')}"
            )
            table.add_row(
                str(record.epoch),
                record.split,
                _format_optional(record.loss_total),
                _format_optional(record.loss_infonce),
                kl,
                _format_optional(record.ce_loss),
                _format_optional(record.top1, "{:.3f}"),
            )
        console.print(table)

    for stream_name, top1 in summary.stream_top1.items():
        console.print(f"  {stream_name}: top-1 [green]{top1:.3f}[/green]")
    if summary.fused_top1 is not None:
        console.print(f"[bold]Fusão:[/bold] top-1 [green]{summary.fused_top1:.3f}[/green]")
    for path in summary.checkpoints:
        console.print(f"[green]✓ Checkpoint: {path}[/green]")
    console.print(f"[dim]Saída em {summary.output_dir}[/dim]")


# ENTRY POINT

def main():
    """Entry point principal."""
    app()


if __name__ == "__main__":
    main()
