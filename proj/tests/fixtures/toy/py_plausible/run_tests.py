import sys

from parity import is_even


def test_two():
    assert is_even(2)


def test_three():
    assert not is_even(3)


def test_flaky():
    assert False


TESTS = {name: fn for name, fn in globals().items() if name.startswith("test_")}


def main(argv):
    names, excluded = [], []
    target = names
    for arg in argv:
        if arg == "--exclude":
            target = excluded
        else:
            target.append(arg)
    failed = 0
    for name, fn in TESTS.items():
        if (names and name not in names) or name in excluded:
            continue
        try:
            fn()
        except Exception:
            print("FAIL: " + name)
            failed += 1
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
