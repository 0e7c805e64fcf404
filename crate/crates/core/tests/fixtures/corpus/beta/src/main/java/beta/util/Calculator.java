package beta.util;

public class Calculator {
    private int state;

    public int apply(int v) {
        int s = 0;
        if (v > 0) {
            s += 1;
        }
        if (v > 1) {
            s += 2;
        }
        return s;
    }

    public int reset(int v) {
        int s = 0;
        if (v > 0) {
            s += 1;
        }
        return s;
    }
}
