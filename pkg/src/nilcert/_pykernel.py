"""Pure-Python collector.  Mirrors ``_ckernel.pyx`` line for line."""

BACKEND = "python"


def pack(tables):
    """``tables = (p, n, pw_vec, pw_letters, conj_letters)``; letter lists
    are stored reversed so that pushing them leaves the first letter on top."""
    return tables


def collect(tables, exps, letters):
    """Multiply the normal form ``exps`` on the right by generator letters.

    ``letters`` is a sequence of generator indices, one positive factor
    each.
    Collection from the left: the letter being processed is moved past the
    tail of the current normal form, conjugating that tail.
    """
    p, n, pw_vec, pw_letters, conj_letters = tables
    e = list(exps)
    stack = list(reversed(letters))
    pop = stack.pop
    push = stack.extend
    while stack:
        i = pop()
        tail = False
        for j in range(n - 1, i, -1):
            ej = e[j]
            if ej:
                tail = True
                word = conj_letters[j][i]
                for _ in range(ej):
                    push(word)
                e[j] = 0
        ei = e[i] + 1
        if ei == p:
            e[i] = 0
            if tail:
                push(pw_letters[i])
            else:
                vec = pw_vec[i]
                for j in range(i + 1, n):
                    e[j] = vec[j]
        else:
            e[i] = ei
    return e


def mul_gen_table(tables, order):
    """``R[x][i]`` = code of (element with code x) * g_i, for every x."""
    p, n = tables[0], tables[1]
    out = []
    for x in range(order):
        exps = []
        y = x
        for _ in range(n):
            y, r = divmod(y, p)
            exps.append(r)
        row = []
        for i in range(n):
            e = collect(tables, exps, (i,))
            code = 0
            for j in range(n - 1, -1, -1):
                code = code * p + e[j]
            row.append(code)
        out.append(row)
    return out
