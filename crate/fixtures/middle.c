int middle(int x, int y, int z) {
    int m;
    m = z;
    if (y < z) {
        if (x < y)
            m = y;
        else if (x < z)
            m = y; /* bug: should assign x */
    } else {
        if (x > y)
            m = y;
        else if (x > z)
            m = x;
    }
    return m;
}
