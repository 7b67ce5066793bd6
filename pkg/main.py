import sys
from pathlib import Path
from typing import Optional, Sequence
sys.path.append(str(Path(__file__).resolve().parent))

def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        from config import settings
    except EnvironmentError as e:
        print("\n" + "=" * 55, file=sys.stderr)
        print("  ERRO DE CONFIGURACAO -- simulador RIO nao pode iniciar", file=sys.stderr)
        print("=" * 55, file=sys.stderr)
        print(e, file=sys.stderr)
        print("Dica: compare seu .env com o .env.example; todas as", file=sys.stderr)
        print("      variaveis RIO_* sao opcionais.\n", file=sys.stderr)
        return 1

    from interface.cli import RioCLI
    return RioCLI().run(argv)

if __name__ == "__main__":
    sys.exit(main())
