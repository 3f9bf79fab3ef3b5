// Running example: closes pooled connections that have been idle too long.
public void closeIdleConnections(long timeMillis) {
    long cutoff = System.currentTimeMillis() - timeMillis;
    for (int i = 0; i < connections.size(); i++) {
        Connection conn = connections.get(i);
        long connectionTime = conn.getTimeAdded();
        if (connectionTime <= cutoff) {
            if (log.isDebugEnabled()) {
                log.debug("Closing idle connection, connection time: " + connectionTime);
            }
            conn.close();
        } else {
            activeCount = activeCount + 1;
        }
    }
}
