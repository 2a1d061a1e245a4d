COLOR_CODES = {
    "red": "\033[0;31m",
    "green": "\033[0;32m",
    "yellow": "\033[0;33m",
    "blue": "\033[0;34m",
    "cyan": "\033[0;36m",
    "white": "\033[0;37m",
    "gold": "\033[1;33m",
    "bold_red": "\033[1;31m",
    "bold_green": "\033[1;32m",
    "bold_white": "\033[1;37m",
    "reset": "\033[0m",
}


def printer(message, color="white", colored=True):
    if not colored:
        print(message)
        return
    color_code = COLOR_CODES.get(color.lower(), COLOR_CODES["white"])
    print(f"{color_code}{message}{COLOR_CODES['reset']}")


def print_check(suite: str, name: str, residual: float, tolerance: float, passed: bool, colored=True):
    """One line per check: status, suite/name, max residual against its tolerance."""
    status = "PASS" if passed else "FAIL"
    printer(
        f"[{status}] {suite}/{name}: residual={residual:.3e} tol={tolerance:.1e}",
        "bold_green" if passed else "bold_red",
        colored,
    )
