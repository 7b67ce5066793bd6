import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence
import numpy as np
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
sys.path.append(str(Path(__file__).resolve().parent.parent))
from config import settings
from quantum.errors import NotRestricted, RIOError
from quantum.restricted import build_T, classify, enumerate_permutations, rank_to_perm, unit_phases
from quantum.statevec import basis_state, fidelity
from quantum.swapnet import (
    QubitRouting,
    f_forward,
    gamma_route,
    lambda_route,
    omega_route,
    p_backward,
    parse_labels,
    s_adjacent,
    upsilon_route,
    w_route,
)
from protocol.resources import XEncoding, resource_report
from protocol.rio import ProtocolConfig, bits_str, result_register, run_protocol, y_labels
from protocol.verify import verify
from storage.files import dumps_json, load_matrix, load_state, save_state, save_transcript

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2
EXIT_NOT_RESTRICTED = 3

console = Console()
err_console = Console(stderr=True)


class Colors:
    PRIMARY   = "green"
    SECONDARY = "cyan"
    DIM       = "grey50"
    WARNING   = "yellow"
    ERROR     = "red"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message: str) -> None:
        raise UsageError(message)


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.logging.level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def parse_phases(raw: Optional[str], n: int) -> np.ndarray:
    """'0,1.57,...' em radianos ou pares complexos como '0.6+0.8j'."""
    if raw is None:
        return np.ones(2 ** n, dtype=complex)
    tokens = [tok.strip() for tok in raw.split(",") if tok.strip()]
    if len(tokens) != 2 ** n:
        raise UsageError(f"--phases precisa de {2 ** n} valores para N={n}, recebido {len(tokens)}")
    try:
        if any("j" in tok for tok in tokens):
            return np.array([complex(tok) for tok in tokens], dtype=complex)
        return unit_phases([float(tok) for tok in tokens])
    except ValueError as e:
        raise UsageError(f"--phases invalido: {e}") from e


def parse_rank(raw: str) -> int:
    if not raw.isdigit():
        raise UsageError(f"x deve ser um inteiro decimal positivo, recebido '{raw}'")
    return int(raw)


def render_error(text: str) -> None:
    err_console.print(Panel(Text(text, style=Colors.ERROR), border_style=Colors.ERROR, box=box.ROUNDED))


def render_kv(title: str, rows: Sequence[tuple[str, str]], ok: bool = True) -> Panel:
    table = Table(box=box.SIMPLE, show_header=False, padding=(0, 2))
    table.add_column("Campo", style=f"bold {Colors.SECONDARY}", min_width=16)
    table.add_column("Valor", style="white")
    for key, value in rows:
        table.add_row(key, value)
    border = Colors.PRIMARY if ok else Colors.ERROR
    return Panel(
        table,
        title=f"[bold {border}] {title} [/bold {border}]",
        border_style=border,
        box=box.ROUNDED,
    )


def render_routing(kind: str, routing: QubitRouting, labels: Sequence[str]) -> Table:
    table = Table(
        box=box.SIMPLE_HEAVY,
        border_style=Colors.DIM,
        header_style=f"bold {Colors.SECONDARY}",
        title=f"[bold {Colors.PRIMARY}]{kind}[/bold {Colors.PRIMARY}]",
        title_justify="left",
    )
    table.add_column("Posicao", justify="right")
    table.add_column("Qubit")
    table.add_column("Destino", justify="right")
    for i, (label, dest) in enumerate(zip(labels, routing.positions()), start=1):
        table.add_row(str(i), label, str(dest))
    return table


def _route_labels(kind: str, n_pairs: int, total: int) -> tuple[str, ...]:
    pairs = tuple(f"{s}{m}" for m in range(1, n_pairs + 1) for s in "AB")
    ys = tuple(f"Y{m}" for m in range(1, n_pairs + 1))
    if kind == "lambda":
        return pairs
    if kind == "omega":
        return tuple(f"A{m}" for m in range(1, n_pairs + 1)) + tuple(f"B{m}" for m in range(1, n_pairs + 1))
    if kind in ("upsilon", "gamma"):
        return pairs + ys
    return tuple(f"q{i}" for i in range(1, total + 1))


class RioCLI:

    def __init__(self) -> None:
        self._handlers: dict[str, Callable[[argparse.Namespace], int]] = {
            "run": self.cmd_run,
            "verify": self.cmd_verify,
            "enumerate": self.cmd_enumerate,
            "classify": self.cmd_classify,
            "route": self.cmd_route,
            "resources": self.cmd_resources,
        }
        self._parser = self._build_parser()

    def _build_parser(self) -> _ArgumentParser:
        common = _ArgumentParser(add_help=False)
        common.add_argument("--format", choices=["json", "text"], default="text")
        common.add_argument("--verbose", "-v", action="store_true", help="Logs em nivel DEBUG")

        parser = _ArgumentParser(prog="rio", description="Simulador de implementacao remota de operacoes restritas")
        sub = parser.add_subparsers(dest="command", required=True)

        run = sub.add_parser("run", parents=[common], help="Executa o protocolo uma vez")
        run.add_argument("--n", type=int, required=True)
        run.add_argument("--x", default="1", help="Rank decimal da permutacao (1-based)")
        run.add_argument("--phases", help="Angulos t_m = e^{i phi_m} ou complexos, separados por virgula")
        run.add_argument("--state", help="Arquivo JSON com |xi> (padrao |0...0>)")
        run.add_argument("--b", help="Resultados forcados de Bob")
        run.add_argument("--a", help="Resultados forcados de Alice")
        run.add_argument("--seed", type=int, default=settings.harness.default_seed)
        run.add_argument("--bob-fixed-b", action="store_true")
        run.add_argument("--out-dir", default=settings.harness.output_dir)

        ver = sub.add_parser("verify", parents=[common], help="Compara o protocolo com T|xi> direto")
        ver.add_argument("--n", type=int, required=True)
        ver.add_argument("--trials", type=int, default=100)
        ver.add_argument("--seed", type=int, default=settings.harness.default_seed)
        ver.add_argument("--x", help="Rank fixo (padrao: aleatorio por tentativa)")
        ver.add_argument("--exhaustive", action="store_true")
        ver.add_argument("--workers", type=int, default=settings.harness.workers)

        enum = sub.add_parser("enumerate", parents=[common], help="Lista p(x) em ordem lexicografica")
        enum.add_argument("--n", type=int, required=True)
        enum.add_argument("--limit", type=int)

        cls = sub.add_parser("classify", parents=[common], help="Recupera (x, t) de uma matriz")
        cls.add_argument("matrix", help="Arquivo JSON {dim, entries}")

        route = sub.add_parser("route", parents=[common], help="Mostra um roteamento de qubits")
        route.add_argument("kind", choices=["lambda", "omega", "upsilon", "gamma", "s", "f", "p", "w"])
        route.add_argument("--n", type=int)
        route.add_argument("--i", type=int)
        route.add_argument("--j", type=int)
        route.add_argument("--from", dest="source")
        route.add_argument("--to", dest="target")

        res = sub.add_parser("resources", parents=[common], help="Contagem de e-bits e c-bits")
        res.add_argument("--n", type=int, required=True)
        res.add_argument("--encoding", choices=[e.value for e in XEncoding], default=XEncoding.FORMULA.value)
        res.add_argument("--bob-fixed-b", action="store_true")

        return parser

    def _emit(self, args: argparse.Namespace, payload: dict, renderable) -> None:
        if args.format == "json":
            sys.stdout.write(dumps_json(payload))
        else:
            console.print(renderable)

    def cmd_run(self, args: argparse.Namespace) -> int:
        n = args.n
        x = parse_rank(args.x)
        t = parse_phases(args.phases, n)
        xi = load_state(args.state) if args.state else basis_state(y_labels(n), "0" * n)

        cfg = ProtocolConfig(
            n=n, x=x, t=t, forced_b=args.b, forced_a=args.a,
            seed=args.seed, bob_fixed_b=args.bob_fixed_b,
        )
        final, transcript = run_protocol(cfg, xi.relabel(y_labels(n)))
        register, _ = result_register(final, n)

        # fases fora do circulo unitario: o protocolo entrega T|xi> renormalizado
        raw = build_T(n, x, t).apply_vector(xi.amps)
        expected = register.with_amps(raw / np.linalg.norm(raw))
        fid = fidelity(register, expected)
        deviation = float(np.max(np.abs(register.amps - expected.amps)))
        ok = fid >= 1.0 - settings.harness.fidelity_threshold

        out_dir = Path(args.out_dir)
        state_path = save_state(out_dir / "final_state.json", register)
        transcript_path = save_transcript(out_dir / "transcript.json", transcript)

        payload = {
            "n": n,
            "x": str(x),
            "b": bits_str(transcript.b_bits),
            "a": bits_str(transcript.a_bits),
            "fidelity": fid,
            "max_deviation": deviation,
            "branch_prob": transcript.branch_prob,
            "ok": ok,
            "final_state": str(state_path),
            "transcript": str(transcript_path),
        }
        rows = [
            ("N / x", f"{n} / {x}"),
            ("b / a", f"{payload['b']} / {payload['a']}"),
            ("Fidelidade", f"{fid:.15f}"),
            ("Desvio max.", f"{deviation:.3e}"),
            ("Prob. do ramo", f"{transcript.branch_prob:.6f}"),
            ("Arquivos", f"{state_path}\n{transcript_path}"),
        ]
        self._emit(args, payload, render_kv("Protocolo", rows, ok))
        return EXIT_OK if ok else EXIT_VERIFY_FAILED

    def cmd_verify(self, args: argparse.Namespace) -> int:
        x = parse_rank(args.x) if args.x else None
        if x is not None:
            rank_to_perm(args.n, x)
        with err_console.status(f"[{Colors.DIM}] Verificando N={args.n}...", spinner="dots"):
            report = verify(
                args.n, trials=args.trials, seed=args.seed, x=x,
                exhaustive=args.exhaustive, workers=args.workers,
            )
        rows = [
            ("Execucoes", str(report.trials)),
            ("Fidelidade min.", f"{report.min_fidelity:.15f}"),
            ("Desvio max.", f"{report.max_deviation:.3e}"),
            ("Prob. do ramo", f"{report.branch_prob_min:.6f} .. {report.branch_prob_max:.6f}"),
            ("Resultados", ", ".join(f"{k}:{v}" for k, v in sorted(report.histogram.items()))),
            ("Falhas", str(len(report.failures))),
        ]
        self._emit(args, report.to_dict(), render_kv("Verificacao", rows, report.passed))
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

    def cmd_enumerate(self, args: argparse.Namespace) -> int:
        if args.n < 1:
            raise UsageError(f"--n deve ser >= 1, recebido {args.n}")
        if args.n >= 4 and args.limit is None:
            raise UsageError(f"N={args.n} tem (2^N)! conjuntos; use --limit")
        perms = list(enumerate_permutations(args.n, args.limit))
        if args.format == "json":
            sys.stdout.write(dumps_json({"n": args.n, "permutations": [list(p.p) for p in perms]}))
        else:
            sys.stdout.write("".join(f"{p}\n" for p in perms))
        return EXIT_OK

    def cmd_classify(self, args: argparse.Namespace) -> int:
        x, t = classify(load_matrix(args.matrix))
        payload = {"x": str(x), "t": [[float(z.real), float(z.imag)] for z in t]}
        rows = [("x", str(x))] + [(f"t{m}", f"{z.real:+.6f} {z.imag:+.6f}i") for m, z in enumerate(t, start=1)]
        self._emit(args, payload, render_kv("Conjunto restrito", rows))
        return EXIT_OK

    def cmd_route(self, args: argparse.Namespace) -> int:
        kind = args.kind
        builders = {"lambda": lambda_route, "omega": omega_route, "upsilon": upsilon_route, "gamma": gamma_route}
        if kind == "w":
            if not args.source or not args.target:
                raise UsageError("route w exige --from e --to")
            routing = w_route(args.source, args.target)
            labels = parse_labels(args.source)
        else:
            if args.n is None:
                raise UsageError(f"route {kind} exige --n")
            if kind in builders:
                routing = builders[kind](args.n)
                labels = _route_labels(kind, args.n, routing.n)
            elif kind == "s":
                if args.i is None:
                    raise UsageError("route s exige --i")
                routing = s_adjacent(args.n, args.i)
                labels = _route_labels(kind, 0, routing.n)
            else:
                if args.i is None or args.j is None:
                    raise UsageError(f"route {kind} exige --i e --j")
                routing = (f_forward if kind == "f" else p_backward)(args.n, args.i, args.j)
                labels = _route_labels(kind, 0, routing.n)

        payload = {"kind": kind, "n": routing.n, "dest": list(routing.positions()),
                   "labels": list(labels), "result": list(routing.permute_labels(labels))}
        self._emit(args, payload, render_routing(kind, routing, labels))
        return EXIT_OK

    def cmd_resources(self, args: argparse.Namespace) -> int:
        report = resource_report(args.n, XEncoding(args.encoding), args.bob_fixed_b)
        bqst = report["bqst"]
        rows = [
            ("Codificacao de x", f"{report['encoding']} ({report['x_bits']} bits)"),
            ("e-bits", f"{report['ebits']}  (BQST: {bqst['ebits']})"),
            ("c-bits B->A", str(report["cbits"]["b_to_a"])),
            ("c-bits A->B", str(report["cbits"]["a_to_b"])),
            ("c-bits total", f"{report['cbits']['total']}  (BQST: {bqst['cbits']['total']})"),
        ]
        self._emit(args, report, render_kv(f"Recursos N={args.n}", rows))
        return EXIT_OK

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            args = self._parser.parse_args(argv)
        except UsageError as e:
            render_error(f"Uso invalido: {e}")
            return EXIT_USAGE
        except SystemExit as e:
            return int(e.code or 0)

        configure_logging(args.verbose)
        try:
            return self._handlers[args.command](args)
        except NotRestricted as e:
            render_error(str(e))
            return EXIT_NOT_RESTRICTED
        except UsageError as e:
            render_error(f"Uso invalido: {e}")
            return EXIT_USAGE
        except (RIOError, ValueError, EnvironmentError) as e:
            logger.error(f"[CLI] {args.command} falhou: {e}")
            render_error(str(e))
            return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(RioCLI().run())
