package beta.model;

public class Point {
    public int x;
    public int y;
    public int z;
    public int u;
    public int v;
    public int w;
}
