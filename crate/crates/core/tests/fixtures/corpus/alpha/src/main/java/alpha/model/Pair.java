package alpha.model;

public class Pair {
    private int a;
    private int b;
    private int c;
    private int d;
    private int e;

    public int getA() {
        return a;
    }

    public int getB() {
        return b;
    }

    public int getC() {
        return c;
    }

    public int getD() {
        return d;
    }

    public int getE() {
        return e;
    }

}
